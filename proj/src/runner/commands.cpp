#include "runner/commands.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>
#include <variant>

#include "gp/disk.hpp"
#include "gp/kernel.hpp"
#include "gp/moment.hpp"
#include "gp/reductions.hpp"
#include "gp/simulate.hpp"
#include "gp/solvers.hpp"
#include "gp/symbol.hpp"
#include "runner/serialize.hpp"
#include "runner/sha256.hpp"

namespace runner {
namespace {

using Files = std::vector<std::pair<std::string, std::string>>;

int resolve_threads(int configured) {
    if (configured > 0) return configured;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? int(hw) : 1;
}

std::string timestamp_utc() {
    const std::time_t now =
        std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

nlohmann::json complex_pair(gp::Complex z) {
    return nlohmann::json::array({z.real(), z.imag()});
}

nlohmann::json coeff_list(const Eigen::VectorXd& p) {
    nlohmann::json arr = nlohmann::json::array();
    for (Eigen::Index i = 0; i < p.size(); ++i) arr.push_back(p[i]);
    return arr;
}

void run_spectrum(const RunConfig& cfg, Files& out) {
    const gp::DiskGeometry geom = gp::make_disk(cfg.R);
    const std::vector<gp::Mode> modes = gp::make_modes(cfg.m_max, cfg.n_max, geom);
    CsvBuilder csv({"m", "n", "mu", "lambda_sq"});
    for (const gp::Mode& mode : modes)
        csv.cell(mode.m).cell(mode.n).cell(mode.mu).cell(mode.lambda_sq);
    out.emplace_back("modes.csv", csv.str());
}

void run_kernel(const RunConfig& cfg, Files& out) {
    double horizon = cfg.T;
    if (const auto* tab = std::get_if<gp::Tabulated>(&cfg.kernel))
        horizon = std::min(horizon, double(tab->samples.size() - 1) * tab->h);

    const int samples = 201;
    CsvBuilder csv({"t", "K"});
    for (int i = 0; i < samples; ++i) {
        const double t = horizon * double(i) / double(samples - 1);
        csv.cell(t).cell(gp::eval_kernel(cfg.kernel, t));
    }
    out.emplace_back("kernel.csv", csv.str());

    nlohmann::json khat;
    khat["k0"] = gp::kernel_k0(cfg.kernel);
    if (std::holds_alternative<gp::Tabulated>(cfg.kernel)) {
        khat["rational"] = false;
    } else {
        const gp::RationalFunction f = gp::laplace_transform(cfg.kernel);
        khat["rational"] = true;
        khat["numerator"] = coeff_list(f.num);
        khat["denominator"] = coeff_list(f.den);
        nlohmann::json zeros = nlohmann::json::array();
        for (const gp::Complex& z : gp::khat_zeros(cfg.kernel)) zeros.push_back(complex_pair(z));
        khat["zeros"] = zeros;
    }
    out.emplace_back("khat.json", khat.dump(2) + "\n");
}

gp::Complex pick_target(const RunConfig& cfg) {
    if (!cfg.target_auto) return cfg.target;
    const std::vector<gp::Complex> zeros = gp::khat_zeros(cfg.kernel);
    if (zeros.empty())
        throw gp::NoTargetError(
            "roots: the kernel transform has no nonzero zeros, so there is no clustering "
            "target; set roots.target explicitly or use an exp-sum kernel with two or more "
            "terms");
    gp::Complex target = zeros.front();
    for (const gp::Complex& z : zeros)
        if (z.real() > target.real()) target = z;
    return target;
}

void run_roots(const RunConfig& cfg, Files& out) {
    const gp::DiskGeometry geom = gp::make_disk(cfg.R);
    const gp::Complex target = pick_target(cfg);
    const gp::RootSequence seq =
        gp::root_sequence(cfg.kernel, cfg.roots_m, cfg.roots_n_lo, cfg.roots_n_hi, geom,
                          target, resolve_threads(cfg.threads));

    CsvBuilder csv({"n", "lambda_sq", "re_root", "im_root", "dist_to_target"});
    for (const gp::RootSequenceEntry& e : seq.entries)
        csv.cell(e.n).cell(e.lambda_sq).cell(e.root.real()).cell(e.root.imag()).cell(e.dist);
    out.emplace_back("roots.csv", csv.str());

    nlohmann::json report;
    report["m"] = seq.m;
    report["n_lo"] = cfg.roots_n_lo;
    report["n_hi"] = cfg.roots_n_hi;
    report["target"] = complex_pair(seq.target);
    report["final_dist"] = seq.entries.back().dist;
    out.emplace_back("report.json", report.dump(2) + "\n");
}

void run_simulate(const RunConfig& cfg, Files& out) {
    const gp::DiskGeometry geom = gp::make_disk(cfg.R);
    const std::vector<gp::Mode> modes = gp::make_modes(cfg.m_max, cfg.n_max, geom);

    Eigen::VectorXcd coeffs = Eigen::VectorXcd::Zero(Eigen::Index(modes.size()));
    for (const ModeCoefficient& mc : cfg.xi) {
        if (mc.m < 0 || mc.m > cfg.m_max || mc.n < 1 || mc.n > cfg.n_max) {
            std::ostringstream os;
            os << "xi: mode (" << mc.m << ", " << mc.n << ") is outside the configured "
               << "mode set m <= " << cfg.m_max << ", n <= " << cfg.n_max;
            throw gp::DomainError(os.str());
        }
        coeffs[mc.m * cfg.n_max + (mc.n - 1)] += mc.value;
    }

    gp::PolarField xi_field =
        gp::make_polar_field(geom, cfg.n_alpha, cfg.radial_points, cfg.radial_panels);
    gp::reconstruct_real(coeffs, modes, geom, xi_field);

    double lambda_sq_max = 0.0;
    for (const gp::Mode& mode : modes) lambda_sq_max = std::max(lambda_sq_max, mode.lambda_sq);
    const double h =
        cfg.h > 0.0 ? cfg.h : gp::default_step(lambda_sq_max, gp::kernel_k0(cfg.kernel));

    const gp::DiskSimulation sim =
        gp::simulate_disk(geom, cfg.kernel, xi_field, gp::SpaceTimeFunction{}, modes, cfg.T, h,
                          cfg.snapshots, resolve_threads(cfg.threads));

    CsvBuilder norms({"t", "norm"});
    for (size_t i = 0; i < sim.norms.size(); ++i)
        norms.cell(double(i) * sim.h).cell(sim.norms[i]);
    out.emplace_back("norms.csv", norms.str());

    nlohmann::json snaps = nlohmann::json::array();
    for (size_t k = 0; k < sim.snapshots.size(); ++k) {
        const gp::FieldSnapshot& snap = sim.snapshots[k];
        const std::string name = "snapshot_" + std::to_string(k) + ".csv";
        CsvBuilder csv({"r", "alpha", "re_theta"});
        for (Eigen::Index i = 0; i < snap.field.r.size(); ++i)
            for (int a = 0; a < snap.field.n_alpha; ++a)
                csv.cell(snap.field.r[i])
                    .cell(snap.field.alpha(a))
                    .cell(snap.field.values(i, a).real());
        out.emplace_back(name, csv.str());
        snaps.push_back({{"t", snap.t}, {"l2_norm", snap.l2_norm}, {"file", name}});
    }

    std::vector<std::string> tags = sim.solver_tags;
    std::sort(tags.begin(), tags.end());
    tags.erase(std::unique(tags.begin(), tags.end()), tags.end());

    nlohmann::json report;
    report["T"] = cfg.T;
    report["h"] = sim.h;
    report["steps"] = sim.norms.size() - 1;
    report["solvers"] = tags;
    report["truncation_tail"] = sim.truncation_tail;
    report["norm_initial"] = sim.norms.front();
    report["norm_final"] = sim.norms.back();
    report["snapshots"] = snaps;
    out.emplace_back("report.json", report.dump(2) + "\n");
}

void run_certify(const RunConfig& cfg, Files& out) {
    const gp::DiskGeometry geom = gp::make_disk(cfg.R);
    const gp::CertificationReport report =
        gp::certify(cfg.kernel, geom, cfg.certify_T, cfg.schedule, cfg.thresholds);

    CsvBuilder csv({"count", "norm", "condition", "residual", "cut_count"});
    for (size_t i = 0; i < report.counts.size(); ++i)
        csv.cell(report.counts[i])
            .cell(report.norms[i])
            .cell(report.conditions[i])
            .cell(report.residuals[i])
            .cell(report.cut_counts[i]);
    out.emplace_back("certify.csv", csv.str());

    nlohmann::json doc;
    doc["T"] = cfg.certify_T;
    doc["schedule"] = report.counts;
    doc["norms"] = report.norms;
    doc["conditions"] = report.conditions;
    doc["residuals"] = report.residuals;
    doc["cut_counts"] = report.cut_counts;
    doc["cluster_diameter"] = report.cluster_diameter;
    doc["min_separation"] = report.min_separation;
    doc["verdict"] = report.verdict;
    doc["thresholds"] = {{"cluster_eps", report.thresholds.cluster_eps},
                         {"obstruction_growth", report.thresholds.obstruction_growth},
                         {"unobstructed_bound", report.thresholds.unobstructed_bound},
                         {"cutoff_rel", report.thresholds.cutoff_rel}};
    out.emplace_back("report.json", doc.dump(2) + "\n");
}

const char* class_name(gp::StabilityClass c) {
    switch (c) {
        case gp::StabilityClass::stable: return "stable";
        case gp::StabilityClass::marginal: return "marginal";
        default: return "unstable";
    }
}

void run_stability(const RunConfig& cfg, Files& out) {
    CsvBuilder csv({"q", "omega_sq", "max_re_root", "verdict"});
    for (int i = 0; i < cfg.q_steps; ++i) {
        const double q = cfg.q_steps == 1
                             ? cfg.q_min
                             : cfg.q_min + (cfg.q_max - cfg.q_min) * double(i) /
                                               double(cfg.q_steps - 1);
        const char* verdict = class_name(
            gp::classify_memory_wave(cfg.alpha, q, cfg.gamma, cfg.convention));
        for (double w : cfg.omega_sq) {
            const double re = gp::max_root_real_part(cfg.alpha, q, cfg.gamma, w, cfg.convention);
            csv.cell(q).cell(w).cell(re).cell(verdict);
        }
    }
    out.emplace_back("stability.csv", csv.str());

    const gp::StabilityInterval iv =
        gp::stability_interval(cfg.alpha, cfg.gamma, cfg.convention);
    nlohmann::json report;
    report["convention"] =
        cfg.convention == gp::CouplingSign::relaxing ? "relaxing" : "reinforcing";
    report["alpha"] = cfg.alpha;
    report["gamma"] = cfg.gamma;
    report["strict_interval"] = {iv.lo, iv.hi};
    report["q_range"] = {cfg.q_min, cfg.q_max};
    report["q_steps"] = cfg.q_steps;
    out.emplace_back("report.json", report.dump(2) + "\n");
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    f.write(content.data(), std::streamsize(content.size()));
    if (!f.good()) throw std::runtime_error("could not write " + path.string());
}

}  // namespace

RunManifest run(const RunConfig& cfg) {
    Files files;
    if (cfg.command == "spectrum")
        run_spectrum(cfg, files);
    else if (cfg.command == "kernel")
        run_kernel(cfg, files);
    else if (cfg.command == "roots")
        run_roots(cfg, files);
    else if (cfg.command == "simulate")
        run_simulate(cfg, files);
    else if (cfg.command == "certify")
        run_certify(cfg, files);
    else if (cfg.command == "stability")
        run_stability(cfg, files);
    else
        throw gp::DomainError("config: unknown command " + cfg.command);

    RunManifest man;
    man.out_dir = cfg.out;
    nlohmann::json listing = nlohmann::json::object();
    for (const auto& [name, content] : files) {
        const std::string hash = sha256_hex(content);
        man.files.emplace_back(name, hash);
        listing[name] = {{"bytes", content.size()}, {"sha256", hash}};
    }
    man.document["command"] = cfg.command;
    man.document["version"] = kToolVersion;
    man.document["generated_at"] = timestamp_utc();
    man.document["config"] = cfg.echo;
    man.document["files"] = listing;

    const std::filesystem::path dir(cfg.out);
    std::filesystem::create_directories(dir);
    for (const auto& [name, content] : files) write_file(dir / name, content);
    write_file(dir / "manifest.json", man.document.dump(2) + "\n");
    return man;
}

}  // namespace runner
