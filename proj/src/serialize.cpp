#include "sgdlab/serialize.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sgdlab {

namespace {

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      default: out += c;
    }
  }
  return out;
}

void append_vec(std::string& out, const Vec& v) {
  out += '[';
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += format_g17(v[i]);
  }
  out += ']';
}

void append_mat(std::string& out, const Mat& m) {
  out += '[';
  for (int i = 0; i < m.rows(); ++i) {
    if (i) out += ',';
    out += '[';
    for (int j = 0; j < m.cols(); ++j) {
      if (j) out += ',';
      out += format_g17(m(i, j));
    }
    out += ']';
  }
  out += ']';
}

void append_interval(std::string& out, const EtaInterval& iv) {
  out += "{\"lo\":" + format_g17(iv.lo) + ",\"hi\":";
  out += std::isinf(iv.hi) ? "\"inf\"" : format_g17(iv.hi);
  out += ",\"empty\":";
  out += iv.empty() ? "true" : "false";
  out += '}';
}

}  // namespace

std::string problem_to_json(const FiniteSumProblem& p) {
  std::string out;
  out += "{\"d\":" + std::to_string(p.dim());
  out += ",\"n\":" + std::to_string(p.count());
  out += ",\"components\":[";
  for (int i = 0; i < p.count(); ++i) {
    if (i) out += ',';
    out += "{\"A\":";
    append_mat(out, p.component(i).hessian);
    out += ",\"b\":";
    append_vec(out, p.component(i).linear);
    out += '}';
  }
  out += "],\"meta\":{";
  out += "\"mu\":" + format_g17(p.mu());
  out += ",\"L\":" + format_g17(p.ell());
  out += ",\"G\":" + format_g17(p.grad_error_G());
  out += ",\"P\":" + format_g17(p.grad_error_P());
  out += ",\"construction\":\"" + json_escape(p.construction_id()) + "\"";
  out += "}}";
  return out;
}

std::string bundle_to_json(const ConstructionBundle& b) {
  std::string out;
  out += "{\"theorem\":\"" + to_string(b.spec.theorem) + "\"";
  out += ",\"params\":{\"n\":" + std::to_string(b.spec.n);
  out += ",\"kappa\":" + format_g17(b.spec.kappa);
  out += ",\"K\":" + std::to_string(b.spec.K);
  out += ",\"G\":" + format_g17(b.spec.G);
  out += ",\"mu\":" + format_g17(b.spec.mu);
  out += ",\"L\":" + format_g17(b.spec.L());
  if (b.spec.theorem == TheoremId::SmallLbConcave) out += ",\"D\":" + format_g17(b.spec.D);
  out += "},\"x0\":";
  append_vec(out, b.x0);
  out += ",\"analytic_bound\":" + format_g17(b.analytic_bound);
  out += ",\"assumption_fit\":{\"g_required\":" + format_g17(b.audited_g_required);
  out += ",\"p_required\":" + format_g17(b.audited_p_required) + "}";
  out += ",\"per_dimension\":[";
  for (size_t i = 0; i < b.per_dimension.size(); ++i) {
    const SubConstruction& sc = b.per_dimension[i];
    if (i) out += ',';
    out += "{\"dim\":" + std::to_string(sc.problem.dim());
    out += ",\"construction\":\"" + json_escape(sc.problem.construction_id()) + "\"";
    out += ",\"x0\":";
    append_vec(out, sc.x0);
    out += ",\"regime\":";
    append_interval(out, sc.interval);
    out += ",\"gap_bound\":" + format_g17(sc.gap_bound);
    out += ",\"constants\":[";
    for (size_t c = 0; c < sc.constants.size(); ++c) {
      if (c) out += ',';
      out += "{\"formula\":\"" + json_escape(sc.constants[c].name) + "\"";
      out += ",\"value\":" + format_g17(sc.constants[c].value) + "}";
    }
    out += "]}";
  }
  out += "],\"problem\":" + problem_to_json(b.problem);
  out += "}";
  return out;
}

std::string run_record_to_csv(const RunRecord& r) {
  if (r.epoch_starts.empty()) throw std::invalid_argument("empty run record");
  const size_t d = r.epoch_starts.front().size();
  std::string out = "epoch,gap";
  for (size_t j = 1; j <= d; ++j) out += ",x_" + std::to_string(j);
  out += '\n';
  for (size_t k = 0; k < r.epoch_starts.size(); ++k) {
    out += std::to_string(k) + ',' + format_g17(r.gaps[k]);
    for (double v : r.epoch_starts[k]) out += ',' + format_g17(v);
    out += '\n';
  }
  return out;
}

std::string trace_to_csv(const RunRecord& r, int dim) {
  std::string out = "epoch,step";
  for (int j = 1; j <= dim; ++j) out += ",x_" + std::to_string(j);
  out += '\n';
  for (const IterateState& s : r.full_trace) {
    out += std::to_string(s.epoch) + ',' + std::to_string(s.within_epoch);
    for (double v : s.x) out += ',' + format_g17(v);
    out += '\n';
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << content;
  if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace sgdlab
