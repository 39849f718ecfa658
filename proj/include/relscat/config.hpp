#pragma once

#include <string>
#include <vector>

#include "relscat/field.hpp"
#include "relscat/free_dynamics.hpp"

namespace relscat {

enum class Task {
    fields_check,
    free_solve,
    scatter,
    scatter_mod,
    verify_asymptotics,
    xray,
    reconstruct,
};

Task task_from_string(const std::string& s);
std::string task_to_string(Task t);

// Sectioned key=value run configuration. Grammar: '#' starts a comment,
// '[name]' opens a section, 'key = values...' assigns within it. Vectors are
// whitespace-separated numbers. Unknown sections or keys are errors.
struct RunConfig {
    // [model]
    int n = 2;
    double c = 1.0;
    double alpha = 1.0;
    FieldParams field;

    // [run]
    Task task = Task::scatter;
    Mode mode = Mode::strict;
    int threads = 0;
    std::string out = "out.csv";
    double r = 0.0;

    // [tolerances]
    double picard_tol = 1e-10;
    double quad_tol = 1e-12;
    double ode_tol = 1e-10;
    int grid_nodes = 401;

    // [rays]: theta then x, each n components; normalized and projected
    std::vector<std::pair<Vec, Vec>> rays;

    // [rho]
    std::vector<double> rhos;

    // [free]
    Vec free_w, free_anchor;
    Direction free_direction = Direction::past;

    // [verify]
    std::string verify_data = "standard";  // standard | modified

    // [xray]
    std::string xray_field = "vs";  // vl | vs | v
    int xray_angles = 180;
    int xray_offsets = 256;
    double xray_extent = 4.0;

    // [reconstruct]
    int rec_angles = 180;
    int rec_offsets = 192;
    double rec_extent = 4.0;
    int rec_grid = 128;
    int rec_degree = 1;

    FieldModel make_model() const;
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

}  // namespace relscat
