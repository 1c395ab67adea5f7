#pragma once

#include <ostream>
#include <string>

#include <json.hpp>

#include "wsnest/consensus.hpp"
#include "wsnest/fusion.hpp"
#include "wsnest/gain_optimizer.hpp"
#include "wsnest/graph.hpp"
#include "wsnest/network_model.hpp"

namespace wsn::io {

using nlohmann::json;

/// Shortest decimal that parses back to the same double.
std::string format_double(double x);

// Graph file: {"n", "edges": [[i, j], ...] with i < j, "seed", "model"}.
json graph_to_json(const Graph& g);
Graph graph_from_json(const json& j);

// Model file: {"sigma_v_sq": [...], "sigma_n_sq", "theta": [re, im],
//              "noisy_self_link", "channels": [[k, i, re, im], ...]}.
json model_to_json(const NetworkModel& model);
NetworkModel model_from_json(const json& j, Graph graph);

json plan_to_json(const SelectionPlan& plan);
/// row_map as (row, receiver, sender) triples plus H entries and noise diagonals.
json global_model_to_json(const GlobalModel& gm);

std::string dump(const json& j);
json parse(const std::string& text);

/// Gains as "i,re,im" rows.
void write_gains_csv(std::ostream& out, const GainVector& gains);
/// "outer_iter,eta,variance,inner_iters_used".
void write_opt_trace_csv(std::ostream& out, const OptTrace& trace);
/// "iter,node,I_re,P_re,P_im,theta_hat_re,theta_hat_im,disagreement"; the
/// estimate and disagreement fields are empty while I_i(k) is below the guard.
/// disagreement = |theta_hat_i(k) - reference|.
void write_mle_trace_csv(std::ostream& out, const MleTrace& trace);

}  // namespace wsn::io
