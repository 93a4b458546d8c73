#include "fusegain/io.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <system_error>

#include "json.hpp"

#include "fusegain/errors.hpp"

namespace fusegain {

using nlohmann::json;

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

namespace {

json matrix_to_rows(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix rows_to_matrix(const json& rows, const char* name) {
  if (!rows.is_array() || rows.empty()) {
    throw InvalidInput(std::string(name) + " must be a non-empty array of rows");
  }
  const std::size_t nrows = rows.size();
  if (!rows[0].is_array() || rows[0].empty()) {
    throw InvalidInput(std::string(name) + " rows must be non-empty arrays");
  }
  const std::size_t ncols = rows[0].size();
  Matrix m(static_cast<Eigen::Index>(nrows), static_cast<Eigen::Index>(ncols));
  for (std::size_t i = 0; i < nrows; ++i) {
    if (!rows[i].is_array() || rows[i].size() != ncols) {
      throw InvalidInput(std::string(name) + " rows have inconsistent lengths");
    }
    for (std::size_t j = 0; j < ncols; ++j) {
      if (!rows[i][j].is_number()) {
        throw InvalidInput(std::string(name) + " entries must be numbers");
      }
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          rows[i][j].get<double>();
    }
  }
  return m;
}

json parse(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw InvalidInput("malformed JSON input");
  return j;
}

const json& field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) {
    throw InvalidInput(std::string("missing required key: ") + key);
  }
  return *it;
}

}  // namespace

std::string system_to_json(const TwoChannelSystem& sys) {
  json j;
  j["p"] = sys.p;
  j["q"] = sys.q;
  j["s"] = sys.s;
  j["t"] = sys.t;
  j["P"] = sys.P;
  j["F"] = matrix_to_rows(sys.F);
  j["Q_uu"] = matrix_to_rows(sys.Q_uu);
  j["Q_vv"] = matrix_to_rows(sys.Q_vv);
  j["Q_thth"] = matrix_to_rows(sys.Q_thth);
  j["Q_thph"] = matrix_to_rows(sys.Q_thph);
  j["Q_phph"] = matrix_to_rows(sys.Q_phph);
  return j.dump(2) + "\n";
}

TwoChannelSystem system_from_json(const std::string& text) {
  const json j = parse(text);
  if (!j.is_object()) throw InvalidInput("system JSON must be an object");
  TwoChannelSystem sys;
  for (const char* key : {"p", "q", "s", "t"}) {
    if (!field(j, key).is_number_integer()) {
      throw InvalidInput(std::string(key) + " must be an integer");
    }
  }
  sys.p = field(j, "p").get<int>();
  sys.q = field(j, "q").get<int>();
  sys.s = field(j, "s").get<int>();
  sys.t = field(j, "t").get<int>();
  if (!field(j, "P").is_number()) throw InvalidInput("P must be a number");
  sys.P = field(j, "P").get<double>();
  sys.F = rows_to_matrix(field(j, "F"), "F");
  sys.Q_uu = rows_to_matrix(field(j, "Q_uu"), "Q_uu");
  sys.Q_vv = rows_to_matrix(field(j, "Q_vv"), "Q_vv");
  sys.Q_thth = rows_to_matrix(field(j, "Q_thth"), "Q_thth");
  sys.Q_thph = rows_to_matrix(field(j, "Q_thph"), "Q_thph");
  sys.Q_phph = rows_to_matrix(field(j, "Q_phph"), "Q_phph");
  validate_system(sys);
  return sys;
}

TwoChannelSystem load_system(const std::string& path) {
  return system_from_json(read_file(path));
}

void save_system(const TwoChannelSystem& sys, const std::string& path) {
  write_file_atomic(path, system_to_json(sys));
}

Matrix channel_from_json(const std::string& text) {
  const json j = parse(text);
  if (j.is_object()) {
    return rows_to_matrix(field(j, "G"), "G");
  }
  return rows_to_matrix(j, "G");
}

Matrix load_channel(const std::string& path) {
  return channel_from_json(read_file(path));
}

std::string analytic_design_to_json(const WaterfillDesign& design, double P) {
  json j;
  j["solver"] = "analytic";
  j["gain_nats"] = design.gain;
  j["P"] = P;
  j["mu"] = design.mu;
  j["kappa"] = design.kappa;
  json lam = json::array();
  for (Eigen::Index i = 0; i < design.lambda2.size(); ++i) {
    lam.push_back(design.lambda2[i]);
  }
  j["lambda2"] = std::move(lam);
  j["G"] = matrix_to_rows(design.G_star);
  return j.dump(2) + "\n";
}

namespace {

const char* stop_name(StopReason r) {
  switch (r) {
    case StopReason::Converged:
      return "converged";
    case StopReason::Stalled:
      return "stalled";
    case StopReason::MaxIters:
      return "max_iters";
  }
  return "unknown";
}

}  // namespace

std::string run_result_to_json(const RunResult& result, Algorithm algo,
                               const OptimConfig& config, double P) {
  json j;
  j["solver"] = algo == Algorithm::Extrinsic ? "extrinsic" : "intrinsic";
  j["step"] = config.step_mode == StepMode::LineSearch
                  ? std::string("linesearch")
                  : "const:" + format_double(config.delta);
  j["gain_nats"] = result.gain;
  j["P"] = P;
  j["iters"] = result.trace.rows.empty()
                   ? 0
                   : result.trace.rows.back().iter;
  j["stop"] = stop_name(result.trace.stop);
  j["seed"] = config.seed;
  j["restart"] = result.restart_index;
  j["G"] = matrix_to_rows(result.G.G);
  return j.dump(2) + "\n";
}

std::string trace_to_csv(const OptimTrace& trace) {
  std::string out = "iter,gain_nats,grad_norm,step\n";
  for (const TraceRow& row : trace.rows) {
    out += std::to_string(row.iter);
    out += ',';
    out += format_double(row.gain);
    out += ',';
    out += format_double(row.grad_norm);
    out += ',';
    out += format_double(row.step);
    out += '\n';
  }
  return out;
}

std::string vessel_to_csv(const WaterfillDesign& design) {
  std::string out = "channel,a,b,base,mercury,water,lambda2\n";
  for (const VesselLevel& v : design.vessel) {
    out += std::to_string(v.index);
    out += ',';
    out += format_double(v.a);
    out += ',';
    out += format_double(v.b);
    out += ',';
    out += format_double(v.base);
    out += ',';
    out += format_double(v.mercury);
    out += ',';
    out += format_double(v.water);
    out += ',';
    out += format_double(v.lambda2);
    out += '\n';
  }
  return out;
}

std::string sweep_to_csv(const DimensionSweep& sweep) {
  std::string out = "k,gain_nats,rank\n";
  for (const SweepRecord& rec : sweep.records) {
    out += std::to_string(rec.k);
    out += ',';
    out += format_double(rec.gain);
    out += ',';
    out += std::to_string(rec.rank);
    out += '\n';
  }
  return out;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path dir = target.parent_path().empty()
                           ? fs::path(".")
                           : target.parent_path();
  std::error_code ec;
  fs::create_directories(dir, ec);

  const fs::path tmp = dir / (target.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw InvalidInput("cannot open for writing: " + tmp.string());
    }
    out.write(content.data(),
              static_cast<std::streamsize>(content.size()));
    if (!out) throw InvalidInput("write failed: " + tmp.string());
  }
  fs::rename(tmp, target, ec);
  if (ec) {
    throw InvalidInput("cannot move " + tmp.string() + " to " + path + ": " +
                       ec.message());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace fusegain
