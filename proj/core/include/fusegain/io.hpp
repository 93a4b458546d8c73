#pragma once

#include <string>

#include "fusegain/dimension.hpp"
#include "fusegain/model.hpp"
#include "fusegain/optimize.hpp"
#include "fusegain/waterfill.hpp"

namespace fusegain {

// Shortest decimal form that parses back to the same double; used by every
// emitter so reruns are byte-identical.
std::string format_double(double x);

// System instances exchange as JSON objects with keys
// p, q, s, t, P, F, Q_uu, Q_vv, Q_thth, Q_thph, Q_phph;
// matrices are row-major nested arrays. Parsing validates the instance.
std::string system_to_json(const TwoChannelSystem& sys);
TwoChannelSystem system_from_json(const std::string& text);

TwoChannelSystem load_system(const std::string& path);
void save_system(const TwoChannelSystem& sys, const std::string& path);

// Accepts {"G": [[...]]} (any design file) or a bare nested array.
Matrix channel_from_json(const std::string& text);
Matrix load_channel(const std::string& path);

std::string analytic_design_to_json(const WaterfillDesign& design,
                                    double P);
std::string run_result_to_json(const RunResult& result, Algorithm algo,
                               const OptimConfig& config, double P);

// "iter,gain_nats,grad_norm,step" rows.
std::string trace_to_csv(const OptimTrace& trace);

// "channel,a,b,base,mercury,water,lambda2" rows.
std::string vessel_to_csv(const WaterfillDesign& design);

// "k,gain_nats,rank" rows.
std::string sweep_to_csv(const DimensionSweep& sweep);

// Writes via a temp file in the same directory plus rename, so readers never
// observe a partial file.
void write_file_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

}  // namespace fusegain
