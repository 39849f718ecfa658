#include "relscat/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <ostream>
#include <thread>

#include "relscat/highenergy.hpp"
#include "relscat/modified.hpp"
#include "relscat/scattering.hpp"
#include "relscat/xray.hpp"

namespace relscat {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

void append_vec(std::string& row, const Vec& v) {
    for (int i = 0; i < v.size(); ++i) {
        row += ',';
        row += fmt17(v[i]);
    }
}

struct RayFailure {
    int index;
    std::string ray;
    std::string message;
};

// Parallel map over ray indices with deterministic, index-ordered results.
template <class Fn>
std::vector<RayFailure> parallel_rays(int count, int threads, Fn&& fn) {
    int nt = threads > 0 ? threads
                         : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    nt = std::min(nt, std::max(1, count));
    std::atomic<int> cursor{0};
    std::mutex mu;
    std::vector<RayFailure> failures;
    auto worker = [&]() {
        for (;;) {
            int idx = cursor.fetch_add(1);
            if (idx >= count) break;
            try {
                fn(idx);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lk(mu);
                failures.push_back({idx, "", e.what()});
            }
        }
    };
    std::vector<std::thread> pool;
    for (int i = 0; i < nt; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    std::sort(failures.begin(), failures.end(),
              [](const RayFailure& a, const RayFailure& b) { return a.index < b.index; });
    return failures;
}

std::string ray_id(const Vec& theta, const Vec& x, double rho) {
    std::string s = "theta=(";
    for (int i = 0; i < theta.size(); ++i) s += (i ? "," : "") + fmt17(theta[i]);
    s += ") x=(";
    for (int i = 0; i < x.size(); ++i) s += (i ? "," : "") + fmt17(x[i]);
    s += ") rho=" + fmt17(rho);
    return s;
}

int run_fields_check(const RunConfig& cfg, std::ostream& log) {
    FieldModel model = cfg.make_model();
    auto probes = default_probes(cfg.n);
    DecayReport rep = verify_decay(model, probes);
    double closure = verify_closure(model, probes);
    double closure_fd = verify_closure_fd(model, probes);
    std::ofstream out(cfg.out);
    out << "check,max_ratio,pass\n";
    for (const auto& row : rep.rows)
        out << row.bound << ',' << fmt17(row.max_ratio) << ',' << (row.pass ? 1 : 0)
            << '\n';
    bool closure_ok = closure <= 1e-10 && closure_fd <= 1e-6;
    out << "closure-analytic," << fmt17(closure) << ',' << (closure <= 1e-10 ? 1 : 0)
        << '\n';
    out << "closure-fd," << fmt17(closure_fd) << ',' << (closure_fd <= 1e-6 ? 1 : 0)
        << '\n';
    log << "fields-check: decay " << (rep.pass ? "pass" : "FAIL") << ", closure "
        << (closure_ok ? "pass" : "FAIL") << "\n";
    return rep.pass && closure_ok ? 0 : 1;
}

int run_free_solve(const RunConfig& cfg, std::ostream& log) {
    FieldModel model = cfg.make_model();
    FreeOptions fo;
    fo.tol = cfg.picard_tol;
    fo.quad_tol = cfg.quad_tol;
    fo.mode = cfg.mode;
    fo.grid = TimeGrid::make(cfg.grid_nodes);
    FreeTrajectory tr =
        solve_free(model, cfg.free_w, cfg.free_anchor, cfg.free_direction, fo);
    std::ofstream out(cfg.out);
    out << "t";
    for (int i = 0; i < cfg.n; ++i) out << ",x_" << i;
    for (int i = 0; i < cfg.n; ++i) out << ",xdot_" << i;
    out << '\n';
    const TimeGrid& g = tr.dev.grid();
    for (int k = 1; k + 1 < g.size(); ++k) {
        double t = g.t(k);
        std::string row = fmt17(t);
        append_vec(row, tr.pos(t));
        append_vec(row, tr.vel(t));
        out << row << '\n';
    }
    log << "free-solve: " << tr.diag.iterations << " iterations, residual "
        << fmt17(tr.diag.residual) << "\n";
    return 0;
}

int run_scatter(const RunConfig& cfg, std::ostream& log, bool modified) {
    FieldModel model = cfg.make_model();
    if (cfg.rays.empty() || cfg.rhos.empty())
        throw ConfigError("scatter tasks need [rays] and [rho] sections");
    auto grid = TimeGrid::make(cfg.grid_nodes);

    struct Row {
        bool ok = false;
        std::string text;
        std::string err;
        std::string id;
    };
    const int R = static_cast<int>(cfg.rhos.size());
    const int count = static_cast<int>(cfg.rays.size()) * R;
    std::vector<Row> rows(count);

    auto failures = parallel_rays(count, cfg.threads, [&](int idx) {
        const auto& [theta, x] = cfg.rays[idx / R];
        double rho = cfg.rhos[idx % R];
        Vec v = theta * rho;
        Row& row = rows[idx];
        row.id = ray_id(theta, x, rho);
        try {
            std::string text = std::to_string(cfg.n) + ',' + fmt17(cfg.c) + ',' +
                               fmt17(cfg.alpha) + ',' + fmt17(rho);
            if (!modified) {
                SolveOptions so;
                so.r = cfg.r;
                so.picard_tol = cfg.picard_tol;
                so.quad_tol = cfg.quad_tol;
                so.mode = cfg.mode;
                so.grid = grid;
                ScatteringSolution s = solve_scattering(model, v, x, so);
                append_vec(text, x);
                append_vec(text, s.datum.a_sc);
                append_vec(text, s.datum.b_sc);
                append_vec(text, s.datum.W);
                text += ',' + std::to_string(s.datum.diag.iterations);
                text += ',' + fmt17(s.datum.diag.residual);
                text += ',';
                text += s.datum.diag.empirical ? "empirical" : "strict";
            } else {
                ModifiedOptions mo;
                mo.r = cfg.r;
                mo.picard_tol = cfg.picard_tol;
                mo.quad_tol = cfg.quad_tol;
                mo.mode = cfg.mode;
                mo.grid = grid;
                ModifiedSolution s = solve_modified(model, v, x, mo);
                append_vec(text, x);
                append_vec(text, s.datum.a_tilde_sc);
                append_vec(text, s.datum.b_tilde_sc);
                append_vec(text, s.datum.W_tilde);
                text += ',' + std::to_string(s.datum.diag.iterations);
                text += ',' + fmt17(s.datum.diag.residual);
                text += ',' + fmt17(s.datum.diag.contraction);
                text += ',' + fmt17(s.datum.g_diag.contraction);
                text += ',';
                text += s.datum.diag.empirical ? "empirical" : "strict";
            }
            row.text = std::move(text);
            row.ok = true;
        } catch (const std::exception& e) {
            row.err = e.what();
            throw;
        }
    });

    std::ofstream out(cfg.out);
    out << "n,c,alpha,v_norm";
    for (int i = 0; i < cfg.n; ++i) out << ",x_" << i;
    const char* base = modified ? "a_tilde_sc" : "a_sc";
    const char* bs = modified ? "b_tilde_sc" : "b_sc";
    const char* w = modified ? "W_tilde" : "W";
    for (int i = 0; i < cfg.n; ++i) out << ',' << base << '_' << i;
    for (int i = 0; i < cfg.n; ++i) out << ',' << bs << '_' << i;
    for (int i = 0; i < cfg.n; ++i) out << ',' << w << '_' << i;
    out << ",iterations,residual";
    if (modified) out << ",contraction,g_contraction";
    out << ",mode\n";
    for (const auto& row : rows)
        if (row.ok) out << row.text << '\n';

    for (const auto& row : rows)
        if (!row.ok && !row.err.empty())
            log << "ray failure: " << row.id << ": " << row.err << "\n";
    (void)failures;
    bool all_ok = true;
    for (const auto& row : rows) all_ok = all_ok && row.ok;
    log << (modified ? "scatter-mod: " : "scatter: ") << count << " rays, "
        << (all_ok ? "all converged" : "some failed") << "\n";
    return all_ok ? 0 : 1;
}

int run_verify(const RunConfig& cfg, std::ostream& log) {
    FieldModel model = cfg.make_model();
    if (cfg.rays.empty() || cfg.rhos.empty())
        throw ConfigError("verify-asymptotics needs [rays] and [rho] sections");
    VerifyOptions vo;
    vo.r = cfg.r;
    vo.picard_tol = cfg.picard_tol;
    vo.quad_tol = cfg.quad_tol;
    vo.mode = cfg.mode;
    vo.grid = TimeGrid::make(cfg.grid_nodes);
    DataMode dm = cfg.verify_data == "modified" ? DataMode::modified
                                                : DataMode::standard;
    HighEnergyReport rep = verify_high_energy(model, cfg.rays, cfg.rhos, dm, vo);
    std::ofstream out(cfg.out);
    out << "theta,x,rho,lhs_a,target_a,resid_a,bound_a,pass_a,"
           "lhs_b,target_b,resid_b,bound_b,pass_b\n";
    for (const auto& r : rep.rows) {
        std::string row;
        for (int i = 0; i < r.theta.size(); ++i)
            row += (i ? " " : "") + fmt17(r.theta[i]);
        row += ',';
        for (int i = 0; i < r.x.size(); ++i) row += (i ? " " : "") + fmt17(r.x[i]);
        row += ',' + fmt17(r.rho) + ',';
        for (int i = 0; i < r.lhs_a.size(); ++i) row += (i ? " " : "") + fmt17(r.lhs_a[i]);
        row += ',';
        for (int i = 0; i < r.target_a.size(); ++i)
            row += (i ? " " : "") + fmt17(r.target_a[i]);
        row += ',' + fmt17(r.resid_a) + ',' + fmt17(r.bound_a) + ',' +
               (r.pass_a ? "1" : "0") + ',';
        for (int i = 0; i < r.lhs_b.size(); ++i) row += (i ? " " : "") + fmt17(r.lhs_b[i]);
        row += ',';
        for (int i = 0; i < r.target_b.size(); ++i)
            row += (i ? " " : "") + fmt17(r.target_b[i]);
        row += ',' + fmt17(r.resid_b) + ',' + fmt17(r.bound_b) + ',' +
               (r.pass_b ? "1" : "0");
        out << row << '\n';
    }
    log << "verify-asymptotics: " << rep.rows.size() << " samples, "
        << (rep.all_pass ? "all pass" : "FAILURES") << "\n";
    return rep.all_pass ? 0 : 1;
}

int run_xray(const RunConfig& cfg, std::ostream& log) {
    if (cfg.n != 2) throw ConfigError("xray task is 2-D only");
    FieldModel model = cfg.make_model();
    std::function<double(const Vec&)> f;
    if (cfg.xray_field == "vl")
        f = [&](const Vec& y) { return model.Vl(y); };
    else if (cfg.xray_field == "vs")
        f = [&](const Vec& y) { return model.Vs(y); };
    else if (cfg.xray_field == "v")
        f = [&](const Vec& y) { return model.V(y); };
    else
        throw ConfigError("xray field must be vl, vs or v");
    double decay = cfg.xray_field == "vl" ? cfg.alpha : cfg.alpha + 1.0;
    if (decay <= 1.0)
        throw ConfigError("xray: the long-range potential decays too slowly; use vs");
    Sinogram s = sinogram_forward(f, cfg.xray_angles, cfg.xray_offsets,
                                  cfg.xray_extent, cfg.quad_tol, decay);
    std::ofstream out(cfg.out);
    out << "K,M,L,N,component\n";
    out << s.K << ',' << s.M << ',' << fmt17(s.L) << ",0," << cfg.xray_field << '\n';
    for (int j = 0; j < s.K; ++j) {
        std::string row;
        for (int m = 0; m < s.M; ++m) row += (m ? "," : "") + fmt17(s.at(j, m));
        out << row << '\n';
    }
    log << "xray: " << s.K << "x" << s.M << " sinogram written\n";
    return 0;
}

int run_reconstruct(const RunConfig& cfg, std::ostream& log) {
    FieldModel model = cfg.make_model();
    ReconstructOptions ro;
    ro.angles = cfg.rec_angles;
    ro.offsets = cfg.rec_offsets;
    ro.extent = cfg.rec_extent;
    ro.grid_n = cfg.rec_grid;
    if (!cfg.rhos.empty()) ro.rhos = cfg.rhos;
    ro.picard_tol = cfg.picard_tol;
    ro.quad_tol = cfg.quad_tol;
    ro.grid_nodes = cfg.grid_nodes;
    ro.threads = cfg.threads;
    ro.degree = cfg.rec_degree;
    ReconstructResult res = reconstruct_Fs(model, ro);

    std::ofstream out(cfg.out);
    out << "component,rms_rel_error,max_fit_residual\n";
    for (size_t i = 0; i < res.rms_component.size(); ++i)
        out << i << ',' << fmt17(res.rms_component[i]) << ','
            << fmt17(res.max_fit_residual) << '\n';
    out << "total," << fmt17(res.rms_total) << ',' << fmt17(res.max_fit_residual)
        << '\n';
    for (size_t comp = 0; comp < res.components.size(); ++comp) {
        const auto& g = res.components[comp];
        std::ofstream gout(cfg.out + ".comp" + std::to_string(comp) + ".csv");
        gout << "K,M,L,N,component\n";
        gout << ro.angles << ',' << ro.offsets << ',' << fmt17(g.L) << ',' << g.N
             << ',' << comp << '\n';
        for (int i = 0; i < g.N; ++i) {
            std::string row;
            for (int j = 0; j < g.N; ++j) row += (j ? "," : "") + fmt17(g.at(i, j));
            gout << row << '\n';
        }
    }
    log << "reconstruct: rms " << fmt17(res.rms_total) << "\n";
    return 0;
}

}  // namespace

int run_task(const RunConfig& cfg, std::ostream& log) {
    switch (cfg.task) {
        case Task::fields_check: return run_fields_check(cfg, log);
        case Task::free_solve: return run_free_solve(cfg, log);
        case Task::scatter: return run_scatter(cfg, log, false);
        case Task::scatter_mod: return run_scatter(cfg, log, true);
        case Task::verify_asymptotics: return run_verify(cfg, log);
        case Task::xray: return run_xray(cfg, log);
        case Task::reconstruct: return run_reconstruct(cfg, log);
    }
    throw ConfigError("unhandled task");
}

}  // namespace relscat
