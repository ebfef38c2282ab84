#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "gp/kernel.hpp"
#include "gp/moment.hpp"
#include "gp/reductions.hpp"

namespace runner {

// Unreadable file or malformed JSON; everything after successful parsing is
// a validation problem and throws gp::DomainError instead.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ModeCoefficient {
    int m = 0;
    int n = 1;
    gp::Complex value{1.0, 0.0};
};

struct RunConfig {
    std::string command;

    bool kernel_given = false;
    gp::MemoryKernel kernel = gp::ExpSum{};

    double R = 1.0;
    int m_max = 2;
    int n_max = 2;

    int roots_m = 1;
    int roots_n_lo = 1;
    int roots_n_hi = 40;
    bool target_auto = true;
    gp::Complex target{};

    double T = 10.0;
    double h = 0.0;  // 0 means the solver default step

    int n_alpha = 32;
    int radial_points = 16;
    int radial_panels = 24;

    std::vector<ModeCoefficient> xi;
    std::vector<double> snapshots;
    bool snapshots_given = false;

    double certify_T = 4.0;
    std::vector<int> schedule{5, 10, 15, 20, 25};
    gp::CertifyThresholds thresholds;

    double alpha = 1.0;
    double gamma = 1.0;
    double q_min = -0.5;
    double q_max = 1.5;
    int q_steps = 41;
    std::vector<double> omega_sq{0.1, 1.0, 10.0, 100.0};
    gp::CouplingSign convention = gp::CouplingSign::relaxing;

    std::string out = "out";
    int threads = 0;  // 0 means all available cores

    nlohmann::json echo;  // the config with every default filled in
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config(const std::string& path);

}  // namespace runner
