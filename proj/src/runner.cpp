// runner.cpp: run, spectrum, ldos, fit and validate drivers

#include "spinbath/runner.hpp"

#include "spinbath/errors.hpp"
#include "spinbath/fitting.hpp"
#include "spinbath/ldos.hpp"
#include "spinbath/rng.hpp"
#include "spinbath/serialize.hpp"
#include "spinbath/states.hpp"

#include <omp.h>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <thread>

namespace spinbath {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr char kCheckpointMagic[8] = {'S', 'P', 'B', 'C', 'K', 'P', 'T', '\0'};
constexpr std::uint32_t kCheckpointVersion = 1;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw ConfigError("cannot write " + p.string());
    }
    out << text;
}

std::uint64_t fingerprint(const Trajectory& traj) {
    const auto& c = traj.config();
    std::ostringstream o;
    o << spec_to_json(traj.spec()) << '|' << fmt(c.run.tau) << '|' << fmt(c.run.truncation_tol) << '|'
      << static_cast<int>(c.run.bounds) << '|' << fmt(c.run.floor) << '|' << fmt(c.run.degeneracy_tol) << '|'
      << to_string(c.system.initial_state) << '|' << to_string(c.environment.initial_state) << '|'
      << fmt(c.run.near_ud_epsilon) << '|' << fmt(c.run.near_ground_epsilon) << '|' << c.run.seed;
    for (const auto& m : c.run.metrics) {
        o << '|' << m;
    }
    return fnv1a64(o.str());
}

template <typename T>
void put(std::ostream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T get(std::istream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!in) {
        throw ConfigError("checkpoint file is truncated");
    }
    return v;
}

void write_checkpoint(const fs::path& path, const Trajectory& traj, std::uint64_t fp) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw ConfigError("cannot write checkpoint " + tmp.string());
        }
        out.write(kCheckpointMagic, sizeof kCheckpointMagic);
        put(out, kCheckpointVersion);
        put(out, static_cast<std::int64_t>(traj.step_index()));
        put(out, static_cast<std::int32_t>(traj.state().n_spins));
        put(out, fp);
        for (const StateVector* v : {&traj.state(), &traj.initial_system_state()}) {
            put(out, static_cast<std::uint64_t>(v->dim()));
            out.write(reinterpret_cast<const char*>(v->amps.data()),
                      static_cast<std::streamsize>(v->dim() * sizeof(cplx)));
        }
        if (!out) {
            throw ConfigError("failed writing checkpoint " + tmp.string());
        }
    }
    fs::rename(tmp, path);
}

struct Checkpoint {
    int step = 0;
    std::vector<cplx> amps;
    std::vector<cplx> sys0;
};

Checkpoint read_checkpoint(const fs::path& path, const Trajectory& traj, std::uint64_t fp) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("no checkpoint to resume from at " + path.string());
    }
    char magic[sizeof kCheckpointMagic];
    in.read(magic, sizeof magic);
    if (!in || std::memcmp(magic, kCheckpointMagic, sizeof magic) != 0) {
        throw ConfigError(path.string() + " is not a checkpoint file");
    }
    if (get<std::uint32_t>(in) != kCheckpointVersion) {
        throw ConfigError("unsupported checkpoint version in " + path.string());
    }
    Checkpoint cp;
    cp.step = static_cast<int>(get<std::int64_t>(in));
    const auto n_spins = get<std::int32_t>(in);
    if (n_spins != traj.state().n_spins || get<std::uint64_t>(in) != fp) {
        throw ConfigError("checkpoint " + path.string() + " belongs to a different configuration");
    }
    for (auto* v : {&cp.amps, &cp.sys0}) {
        const auto dim = get<std::uint64_t>(in);
        v->resize(dim);
        in.read(reinterpret_cast<char*>(v->data()), static_cast<std::streamsize>(dim * sizeof(cplx)));
        if (!in) {
            throw ConfigError("checkpoint file is truncated");
        }
    }
    if (cp.amps.size() != traj.state().dim() || cp.sys0.size() != traj.initial_system_state().dim()) {
        throw ConfigError("checkpoint dimensions do not match the configuration");
    }
    return cp;
}

// Keep the header and the first `rows` data lines.
void truncate_csv(const fs::path& path, std::size_t rows) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot reopen " + path.string() + " for resuming");
    }
    std::string kept;
    std::string line;
    std::size_t n = 0;
    while (n < rows + 1 && std::getline(in, line)) {
        kept += line;
        kept += '\n';
        ++n;
    }
    if (n < rows + 1) {
        throw ConfigError(path.string() + " has fewer rows than the checkpoint step");
    }
    in.close();
    write_text(path, kept);
}

json fit_to_json(const DecayFit& f) {
    return json{{"offset", f.offset},
                {"amplitude", f.amplitude},
                {"tau_decay", f.tau_decay},
                {"rms_residual", f.rms_residual},
                {"t_start", f.window.t_start},
                {"t_end", f.window.t_end},
                {"n_samples", f.n_samples},
                {"iterations", f.iterations}};
}

double frobenius_commutator(const CompiledHamiltonian& a, const CompiledHamiltonian& b) {
    const std::size_t dim = a.dim();
    std::vector<cplx> e(dim, cplx{0.0, 0.0});
    std::vector<cplx> ae(dim), be(dim), bae(dim), abe(dim);
    double s = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
        e[k] = 1.0;
        a.apply(e, ae);
        b.apply(e, be);
        b.apply(ae, bae);
        a.apply(be, abe);
        for (std::size_t r = 0; r < dim; ++r) {
            s += std::norm(abe[r] - bae[r]);
        }
        e[k] = 0.0;
    }
    return std::sqrt(s);
}

} // namespace

// ---------------------------------------------------------------------------

Trajectory::Trajectory(const RunConfig& cfg) : Trajectory(cfg, build_spec(cfg)) {}

Trajectory::Trajectory(const RunConfig& cfg, HamiltonianSpec spec)
    : cfg_(cfg), spec_(std::move(spec)), h_(spec_) {
    init();
}

void Trajectory::init() {
    validate_config(cfg_);
    if (spec_.n_sys != cfg_.system.n || spec_.n_env != cfg_.environment.n) {
        throw ShapeError("Hamiltonian registers do not match the configuration");
    }
    basis_ = eigendecompose_system(spec_.system_part(), cfg_.run.degeneracy_tol);
    StateOptions so;
    so.near_ud_epsilon = cfg_.run.near_ud_epsilon;
    so.near_ground_epsilon = cfg_.run.near_ground_epsilon;
    RngStream rng_sys = RngStream::derive(cfg_.run.seed, streams::state_sys);
    RngStream rng_env = RngStream::derive(cfg_.run.seed, streams::state_env);
    psi_sys0_ = make_state(cfg_.system.initial_state, spec_.n_sys, spec_.system_part(), rng_sys, so);
    const StateVector env =
        make_state(cfg_.environment.initial_state, spec_.n_env, spec_.environment_part(), rng_env, so);
    psi_ = product_state(psi_sys0_, env);
    const SpectralBounds b = spectral_bounds(h_, cfg_.run.bounds);
    prop_ = std::make_unique<ChebyshevPropagator>(h_, make_plan(b, cfg_.run.tau, cfg_.run.truncation_tol));
}

void Trajectory::advance() {
    prop_->step(psi_.amps);
    ++step_;
}

void Trajectory::restore(int step, std::vector<cplx> amps) {
    if (amps.size() != psi_.dim()) {
        throw ShapeError("restored state has the wrong dimension");
    }
    psi_.amps = std::move(amps);
    step_ = step;
}

ReducedDensityMatrix Trajectory::rho() const { return partial_trace_env(psi_, spec_.n_sys); }

MetricSample Trajectory::sample() const {
    const ReducedDensityMatrix r = rho();
    if (cfg_.run.wants("echo")) {
        const ReducedDensityMatrix r0 = isolated_system_rho(basis_, psi_sys0_, time());
        return compute_metrics(time(), r, basis_, cfg_.run.floor, &r0);
    }
    return compute_metrics(time(), r, basis_, cfg_.run.floor, nullptr);
}

void Trajectory::corrupt_bounds(double factor) {
    SpectralBounds b = prop_->plan().bounds;
    const double c = b.center();
    const double h = b.half_width() * factor;
    b.e_min = c - h;
    b.e_max = c + h;
    prop_ = std::make_unique<ChebyshevPropagator>(h_, make_plan(b, cfg_.run.tau, cfg_.run.truncation_tol));
}

// ---------------------------------------------------------------------------

std::string csv_header(int sys_dim) {
    std::string h = "t,sigma,gamma,delta,b,S_quad,echo,E_S";
    for (int k = 0; k < sys_dim; ++k) {
        h += ",rho_" + std::to_string(k);
    }
    return h;
}

std::string csv_row(const MetricSample& m, const RunSettings& run) {
    std::string r = fmt(m.t);
    auto field = [&](const char* name, const std::optional<double>& v) {
        r += ',';
        if (v && run.wants(name)) {
            r += fmt(*v);
        }
    };
    field("sigma", m.sigma);
    field("gamma", m.gamma);
    field("delta", m.delta);
    field("b", m.b);
    field("S_quad", m.s_quad);
    field("echo", m.echo);
    field("E_S", m.e_s);
    for (double d : m.rho_diag) {
        field("rho", d);
    }
    return r;
}

std::string correlator_header() { return "t,S1_dot_S2,SzSz,SxSx,M,Sx1,Sz1,concurrence"; }

std::string correlator_row(const MetricSample& m) {
    std::string r = fmt(m.t);
    const Correlators c = m.correlators.value_or(Correlators{});
    for (double v : {c.s1_dot_s2, c.zz, c.xx, c.magnetization, c.sx1, c.sz1}) {
        r += ',' + fmt(v);
    }
    r += ',';
    if (m.concurrence) {
        r += fmt(*m.concurrence);
    }
    return r;
}

std::size_t CsvTable::rows() const { return data.empty() ? 0 : data.begin()->second.size(); }

const std::vector<double>& CsvTable::at(const std::string& column) const {
    const auto it = data.find(column);
    if (it == data.end()) {
        throw ConfigError("CSV has no column '" + column + "'");
    }
    return it->second;
}

CsvTable read_csv(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open " + path.string());
    }
    CsvTable t;
    std::string line;
    auto split = [](const std::string& s) {
        std::vector<std::string> out;
        std::size_t pos = 0;
        while (true) {
            const auto c = s.find(',', pos);
            out.push_back(s.substr(pos, c == std::string::npos ? std::string::npos : c - pos));
            if (c == std::string::npos) {
                return out;
            }
            pos = c + 1;
        }
    };
    if (!std::getline(in, line)) {
        throw ConfigError(path.string() + " is empty");
    }
    t.columns = split(line);
    for (const auto& c : t.columns) {
        t.data[c];
    }
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        const auto fields = split(line);
        if (fields.size() != t.columns.size()) {
            throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": wrong number of fields");
        }
        for (std::size_t k = 0; k < fields.size(); ++k) {
            const double v = fields[k].empty() ? std::numeric_limits<double>::quiet_NaN()
                                               : std::strtod(fields[k].c_str(), nullptr);
            t.data[t.columns[k]].push_back(v);
        }
    }
    return t;
}

// ---------------------------------------------------------------------------

RunSummary run_simulation(const RunConfig& cfg, const RunOptions& opts) {
    const fs::path dir = opts.out_dir.empty() ? fs::path(cfg.run.output) : opts.out_dir;
    fs::create_directories(dir);
    Trajectory traj(cfg);
    if (opts.corrupt_bounds > 0.0) {
        traj.corrupt_bounds(opts.corrupt_bounds);
    }
    const std::uint64_t fp = fingerprint(traj);
    const fs::path metrics_path = dir / "metrics.csv";
    const fs::path corr_path = dir / "correlators.csv";
    const fs::path ckpt_path = dir / "checkpoint.bin";
    const bool want_corr = cfg.run.wants("correlators");

    RunSummary summary;
    std::ofstream metrics;
    std::ofstream corr;
    if (opts.resume) {
        Checkpoint cp = read_checkpoint(ckpt_path, traj, fp);
        if (cp.step > cfg.run.n_steps) {
            throw ConfigError("checkpoint step exceeds n_steps");
        }
        for (std::size_t k = 0; k < cp.sys0.size(); ++k) {
            if (cp.sys0[k] != traj.initial_system_state().amps[k]) {
                throw ConfigError("checkpoint initial state differs from the configuration");
            }
        }
        traj.restore(cp.step, std::move(cp.amps));
        truncate_csv(metrics_path, static_cast<std::size_t>(cp.step) + 1);
        metrics.open(metrics_path, std::ios::binary | std::ios::app);
        if (want_corr) {
            truncate_csv(corr_path, static_cast<std::size_t>(cp.step) + 1);
            corr.open(corr_path, std::ios::binary | std::ios::app);
        }
        summary.resumed = true;
    } else {
        write_text(dir / "spec.json", spec_to_json(traj.spec()) + "\n");
        write_text(dir / "config.ini", to_text(cfg));
        metrics.open(metrics_path, std::ios::binary | std::ios::trunc);
        metrics << csv_header(traj.basis().dim()) << '\n';
        const MetricSample m0 = traj.sample();
        metrics << csv_row(m0, cfg.run) << '\n';
        if (want_corr) {
            corr.open(corr_path, std::ios::binary | std::ios::trunc);
            corr << correlator_header() << '\n' << correlator_row(m0) << '\n';
        }
    }
    if (!metrics || (want_corr && !corr)) {
        throw ConfigError("cannot write output files in " + dir.string());
    }

    auto checkpoint = [&] {
        metrics.flush();
        if (want_corr) {
            corr.flush();
        }
        write_checkpoint(ckpt_path, traj, fp);
    };

    if (!opts.quiet) {
        std::fprintf(stderr, "run: %d+%d spins, tau=%.6g, %d steps, Chebyshev order %d%s\n", cfg.system.n,
                     cfg.environment.n, cfg.run.tau, cfg.run.n_steps, traj.plan().order,
                     summary.resumed ? " (resumed)" : "");
    }
    while (traj.step_index() < cfg.run.n_steps) {
        traj.advance();
        const MetricSample m = traj.sample();
        metrics << csv_row(m, cfg.run) << '\n';
        if (want_corr) {
            corr << correlator_row(m) << '\n';
        }
        const int step = traj.step_index();
        if (step == opts.stop_after) {
            checkpoint();
            summary.last_step = step;
            summary.stopped_early = true;
            return summary;
        }
        if (step % cfg.run.checkpoint_every == 0) {
            checkpoint();
            if (!opts.quiet) {
                std::fprintf(stderr, "  step %d/%d  t=%.6g  sigma=%.6g\n", step, cfg.run.n_steps, m.t, m.sigma);
            }
        }
    }
    checkpoint();
    metrics.close();
    corr.close();
    summary.last_step = traj.step_index();

    if (cfg.run.fit) {
        run_fit(dir);
    }
    if (cfg.run.ldos) {
        run_ldos(cfg, dir);
    }
    return summary;
}

std::vector<int> run_batch(const RunConfig& cfg, const std::vector<std::uint64_t>& seeds, int jobs,
                           const RunOptions& opts) {
    if (jobs < 1) {
        throw ConfigError("--jobs must be at least 1");
    }
    const fs::path base = opts.out_dir.empty() ? fs::path(cfg.run.output) : opts.out_dir;
    std::vector<int> codes(seeds.size(), 0);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        omp_set_num_threads(1);
        while (true) {
            const std::size_t k = next.fetch_add(1);
            if (k >= seeds.size()) {
                return;
            }
            RunConfig c = cfg;
            c.run.seed = seeds[k];
            RunOptions o = opts;
            o.out_dir = base / ("seed_" + std::to_string(seeds[k]));
            o.quiet = true;
            try {
                run_simulation(c, o);
            } catch (const std::exception& e) {
                codes[k] = exit_code_for(e);
                std::fprintf(stderr, "seed %llu: %s\n", static_cast<unsigned long long>(seeds[k]), e.what());
            }
        }
    };
    std::vector<std::thread> pool;
    const auto n_threads = std::min<std::size_t>(static_cast<std::size_t>(jobs), seeds.size());
    for (std::size_t k = 0; k < n_threads; ++k) {
        pool.emplace_back(worker);
    }
    for (auto& t : pool) {
        t.join();
    }
    return codes;
}

void write_spectrum(const RunConfig& cfg, std::ostream& out) {
    validate_config(cfg);
    const HamiltonianSpec spec = build_spec(cfg);
    const EigenBasis b = eigendecompose_system(spec.system_part(), cfg.run.degeneracy_tol);
    out << "index,energy,cluster\n";
    for (int k = 0; k < b.dim(); ++k) {
        out << k << ',' << fmt(b.energies(k)) << ',' << b.cluster[static_cast<std::size_t>(k)] << '\n';
    }
}

// ---------------------------------------------------------------------------

json fit_metrics(const CsvTable& table) {
    const auto& t = table.at("t");
    auto series = [&](const std::string& name) {
        std::pair<std::vector<double>, std::vector<double>> s;
        const auto& y = table.at(name);
        for (std::size_t k = 0; k < t.size(); ++k) {
            if (std::isfinite(y[k])) {
                s.first.push_back(t[k]);
                s.second.push_back(y[k]);
            }
        }
        return s;
    };
    json report;
    double t_transient = std::numeric_limits<double>::infinity();
    {
        const auto s = series("sigma");
        if (!s.first.empty()) {
            t_transient = transient_end(s.first, s.second);
        }
    }
    report["transient_end"] = std::isfinite(t_transient) ? json(t_transient) : json(nullptr);
    struct Job {
        const char* key;
        const char* column;
        DecayShape shape;
        bool after_transient;
    };
    const Job jobs[] = {
        {"sigma_exponential", "sigma", DecayShape::exponential, false},
        {"delta_exponential", "delta", DecayShape::exponential, false},
        {"b_exponential", "b", DecayShape::exponential, true},
        {"E_S_exponential", "E_S", DecayShape::exponential, true},
        {"sigma_gaussian", "sigma", DecayShape::gaussian, false},
        {"E_S_gaussian", "E_S", DecayShape::gaussian, true},
    };
    for (const auto& j : jobs) {
        try {
            const auto s = series(j.column);
            FitWindow w;
            w.t_start = j.after_transient ? t_transient : 0.0;
            const DecayFit f = j.shape == DecayShape::exponential ? fit_exponential(s.first, s.second, w)
                                                                  : fit_gaussian_decay(s.first, s.second, w);
            report[j.key] = fit_to_json(f);
        } catch (const std::exception& e) {
            report[j.key] = json{{"error", e.what()}};
        }
    }
    auto tau_of = [&](const char* key) -> json {
        const auto& f = report[key];
        return f.contains("tau_decay") ? f["tau_decay"] : json(nullptr);
    };
    report["T2"] = tau_of("sigma_exponential");
    report["T1"] = tau_of("E_S_exponential");
    return report;
}

json run_fit(const fs::path& out_dir) {
    const json report = fit_metrics(read_csv(out_dir / "metrics.csv"));
    write_text(out_dir / "fit_report.json", report.dump(2) + "\n");
    return report;
}

json run_ldos(const RunConfig& cfg, const fs::path& out_dir) {
    fs::create_directories(out_dir);
    Trajectory traj(cfg);
    const CompiledHamiltonian& h = traj.hamiltonian();
    const StateVector& psi0 = traj.state();
    const SpectralBounds b = spectral_bounds(h, cfg.run.bounds);
    const LdosParams p = default_ldos_params(b);
    const PropagatorPlan plan = make_plan(b, p.tau, cfg.run.truncation_tol);
    const auto a = survival_amplitudes(h, plan, psi0, p.n_steps);
    const LdosSpectrum s = ldos_spectrum(a, p.tau, p.window_width, ldos_grid(b, p.window_width, p.de), b);
    const LdosMoments m = ldos_moments(s);

    std::vector<cplx> hpsi(psi0.dim());
    h.apply(psi0.amps, hpsi);
    const double e1 = inner(psi0.amps, hpsi).real();
    const double e2 = norm2(hpsi);

    std::string csv = "E,weight\n";
    for (std::size_t k = 0; k < s.energies.size(); ++k) {
        csv += fmt(s.energies[k]) + ',' + fmt(s.weights[k]) + '\n';
    }
    write_text(out_dir / "ldos.csv", csv);
    json summary{{"norm", m.norm},
                 {"mean", m.mean},
                 {"second_moment", m.second},
                 {"variance", m.variance},
                 {"expected_mean", e1},
                 {"expected_variance", e2 - e1 * e1},
                 {"window_width", s.window_width},
                 {"tau", s.tau},
                 {"t_max", s.t_max},
                 {"n_samples", a.size()},
                 {"e_min", b.e_min},
                 {"e_max", b.e_max}};
    write_text(out_dir / "ldos_summary.json", summary.dump(2) + "\n");
    return summary;
}

// ---------------------------------------------------------------------------

bool ValidationReport::passed() const {
    return chebyshev_vs_exact <= tolerance && partial_trace_vs_dense <= tolerance && bounds_violation <= tolerance;
}

json ValidationReport::to_json() const {
    return json{{"chebyshev_vs_exact", chebyshev_vs_exact},
                {"partial_trace_vs_dense", partial_trace_vs_dense},
                {"bounds_violation", bounds_violation},
                {"commutator_HS_HSE", commutator_sys_int},
                {"commutator_HS_HE", commutator_sys_env},
                {"tolerance", tolerance},
                {"passed", passed()}};
}

ValidationReport run_validation(const RunConfig& cfg, double corrupt_bounds) {
    if (cfg.n_total() > 12) {
        throw BudgetError("validate is limited to 12 spins in total");
    }
    Trajectory traj(cfg);
    const HamiltonianSpec& spec = traj.spec();
    const StateVector psi0 = traj.state();
    if (corrupt_bounds > 0.0) {
        traj.corrupt_bounds(corrupt_bounds);
    }
    const int steps = 10;
    for (int k = 0; k < steps; ++k) {
        traj.advance();
    }
    ValidationReport r;
    const StateVector exact = propagate_exact(spec, psi0, steps * cfg.run.tau);
    double d2 = 0.0;
    for (std::size_t k = 0; k < exact.dim(); ++k) {
        d2 += std::norm(exact.amps[k] - traj.state().amps[k]);
    }
    r.chebyshev_vs_exact = std::sqrt(d2);

    const StateVector& psi = traj.state();
    const std::size_t d = std::size_t{1} << spec.n_sys;
    const std::size_t env_dim = psi.dim() / d;
    const ReducedDensityMatrix rho = partial_trace_env(psi, spec.n_sys);
    double pt = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            cplx acc{0.0, 0.0};
            for (std::size_t p = 0; p < env_dim; ++p) {
                acc += psi.amps[i + d * p] * std::conj(psi.amps[j + d * p]);
            }
            pt = std::max(pt, std::abs(acc - rho.m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))));
        }
    }
    r.partial_trace_vs_dense = pt;

    const CompiledHamiltonian& h = traj.hamiltonian();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.dense(), Eigen::EigenvaluesOnly);
    const SpectralBounds b = spectral_bounds(h, cfg.run.bounds);
    r.bounds_violation = std::max({0.0, b.e_min - es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff() - b.e_max});

    const int n = spec.n_total();
    const CompiledHamiltonian hs(spec.sys_terms, n);
    const CompiledHamiltonian he(spec.env_terms, n);
    const CompiledHamiltonian hi(spec.int_terms, n);
    r.commutator_sys_int = frobenius_commutator(hs, hi);
    r.commutator_sys_env = frobenius_commutator(hs, he);
    return r;
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const BudgetError*>(&e) != nullptr) {
        return 4;
    }
    if (dynamic_cast<const ConfigError*>(&e) != nullptr || dynamic_cast<const fs::filesystem_error*>(&e) != nullptr) {
        return 2;
    }
    if (dynamic_cast<const NumericalError*>(&e) != nullptr) {
        return 3;
    }
    return 1;
}

} // namespace spinbath
