#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wsnest/consensus.hpp"
#include "wsnest/gain_optimizer.hpp"

namespace wsn {

/// Replaceable pieces under test. Defaults are the library routines; fixtures
/// swap in mutants to confirm the properties catch them.
struct SelfCheckHooks {
    std::function<ConsensusState<cd>(const Graph&, const AdmmConfig&, const ConsensusState<cd>&,
                                     std::span<const cd>)>
        admm_step = [](const Graph& g, const AdmmConfig& cfg, const ConsensusState<cd>& s,
                       std::span<const cd> x) { return wsn::admm_step<cd>(g, cfg, s, x); };
    std::function<QuadraticForm(const GlobalModel&, const Eigen::VectorXcd&, double)> build_q =
        [](const GlobalModel& gm, const Eigen::VectorXcd& yt, double eta0) {
            return wsn::build_Q(gm, yt, eta0);
        };
};

struct PropertyResult {
    std::string name;
    std::size_t cases = 0;
    std::size_t failures = 0;
    std::string first_failure;

    bool passed() const { return failures == 0; }
};

struct SelfCheckReport {
    std::vector<PropertyResult> properties;

    bool passed() const;
    std::optional<std::string> first_failing() const;
};

/// Every module's invariants on random instances with n <= 8.
SelfCheckReport run_selfcheck(std::uint64_t seed, std::size_t cases = 100,
                              const SelfCheckHooks& hooks = {});

}  // namespace wsn
