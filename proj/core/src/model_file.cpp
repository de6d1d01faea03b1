#include "pwahier/model_file.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string_view>

namespace pwahier {
namespace {

[[noreturn]] void fail(const YAML::Node& node, const std::string& what) {
  const YAML::Mark mark = node.Mark();
  if (mark.is_null()) throw ParseError(1, 1, what);
  throw ParseError(static_cast<std::size_t>(mark.line) + 1, static_cast<std::size_t>(mark.column) + 1, what);
}

void check_keys(const YAML::Node& node, std::initializer_list<std::string_view> allowed, const std::string& where) {
  if (!node.IsMap()) fail(node, where + " must be a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      fail(kv.first, "unknown key '" + key + "' in " + where);
    }
  }
}

YAML::Node require(const YAML::Node& parent, const char* key, const std::string& where) {
  YAML::Node child = parent[key];
  if (!child) fail(parent, "missing key '" + std::string(key) + "' in " + where);
  return child;
}

double as_number(const YAML::Node& node, const std::string& what) {
  if (!node.IsScalar()) fail(node, what + " must be a number");
  const std::string text = node.Scalar();
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || !std::isfinite(v)) {
    fail(node, what + " is not a finite number: '" + text + "'");
  }
  return v;
}

std::size_t as_count(const YAML::Node& node, const std::string& what) {
  const double v = as_number(node, what);
  if (v < 0.0 || v != std::floor(v)) fail(node, what + " must be a nonnegative integer");
  return static_cast<std::size_t>(v);
}

bool as_bool(const YAML::Node& node, const std::string& what) {
  if (!node.IsScalar()) fail(node, what + " must be true or false");
  const std::string& s = node.Scalar();
  if (s == "true") return true;
  if (s == "false") return false;
  fail(node, what + " must be true or false");
}

Vector as_vector(const YAML::Node& node, std::size_t size, const std::string& what) {
  if (!node.IsSequence()) fail(node, what + " must be a list of numbers");
  if (node.size() != size) {
    fail(node, what + " has " + std::to_string(node.size()) + " entries, expected " + std::to_string(size));
  }
  Vector v(size);
  for (std::size_t i = 0; i < size; ++i) v[i] = as_number(node[i], what);
  return v;
}

Matrix as_matrix(const YAML::Node& node, std::size_t rows, std::size_t cols, const std::string& what) {
  if (!node.IsSequence()) fail(node, what + " must be a list of rows");
  if (node.size() != rows) {
    fail(node, what + " has " + std::to_string(node.size()) + " rows, expected " + std::to_string(rows));
  }
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const Vector row = as_vector(node[r], cols, what + " row " + std::to_string(r + 1));
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = row[c];
  }
  return m;
}

/// Row count is free; used for cell constraint matrices.
Matrix as_matrix_rows(const YAML::Node& node, std::size_t cols, const std::string& what) {
  if (!node.IsSequence() || node.size() == 0) fail(node, what + " must be a non-empty list of rows");
  return as_matrix(node, node.size(), cols, what);
}

std::optional<Matrix> optional_matrix(const YAML::Node& parent, const char* key, std::size_t rows, std::size_t cols,
                                      const std::string& what) {
  const YAML::Node node = parent[key];
  if (!node) return std::nullopt;
  return as_matrix(node, rows, cols, what);
}

ModelCell parse_cell(const YAML::Node& node, std::size_t dim, const std::string& what) {
  check_keys(node, {"E", "f"}, what);
  ModelCell cell;
  cell.e = as_matrix_rows(require(node, "E", what), dim, what + " E");
  cell.f = as_vector(require(node, "f", what), cell.e.rows(), what + " f");
  return cell;
}

std::vector<ModelCell> parse_cells(const YAML::Node& node, std::size_t count, std::size_t dim, const std::string& what) {
  if (!node.IsSequence()) fail(node, what + " must be a list");
  if (node.size() != count) {
    fail(node, what + " lists " + std::to_string(node.size()) + " cells, expected " + std::to_string(count));
  }
  std::vector<ModelCell> cells;
  for (std::size_t i = 0; i < count; ++i) cells.push_back(parse_cell(node[i], dim, what + " " + std::to_string(i + 1)));
  return cells;
}

void parse_dimensions(const YAML::Node& node, ModelFile& model) {
  check_keys(node, {"n", "p", "k", "m", "q", "s", "r"}, "dimensions");
  model.n = as_count(require(node, "n", "dimensions"), "n");
  model.p = as_count(require(node, "p", "dimensions"), "p");
  model.k = as_count(require(node, "k", "dimensions"), "k");
  model.m = as_count(require(node, "m", "dimensions"), "m");
  model.q = as_count(require(node, "q", "dimensions"), "q");
  model.s = as_count(require(node, "s", "dimensions"), "s");
  model.r = as_count(require(node, "r", "dimensions"), "r");
  for (auto [v, name] : {std::pair{model.n, "n"}, {model.p, "p"}, {model.k, "k"}, {model.m, "m"}, {model.q, "q"},
                         {model.s, "s"}, {model.r, "r"}}) {
    if (v == 0) fail(node, std::string("dimension ") + name + " must be positive");
  }
}

void parse_system(const YAML::Node& node, ModelFile& model) {
  check_keys(node, {"modes", "cells", "continuity"}, "system");
  const YAML::Node modes = require(node, "modes", "system");
  if (!modes.IsSequence() || modes.size() != model.s) {
    fail(modes, "system.modes must list s = " + std::to_string(model.s) + " modes");
  }
  for (std::size_t i = 0; i < model.s; ++i) {
    const std::string where = "mode " + std::to_string(i + 1);
    const YAML::Node mn = modes[i];
    check_keys(mn, {"A", "B", "C", "K", "R", "P", "Q"}, where);
    ModelMode mode;
    mode.a = as_matrix(require(mn, "A", where), model.n, model.n, where + " A");
    mode.b = as_matrix(require(mn, "B", where), model.n, model.p, where + " B");
    mode.c = as_matrix(require(mn, "C", where), model.k, model.n, where + " C");
    mode.k = as_matrix(require(mn, "K", where), model.p, model.n, where + " K");
    mode.r = optional_matrix(mn, "R", model.p, model.q, where + " R");
    mode.p = optional_matrix(mn, "P", model.n, model.m, where + " P");
    mode.q = optional_matrix(mn, "Q", model.p, model.m, where + " Q");
    if (mode.p.has_value() != mode.q.has_value()) fail(mn, where + " must give P and Q together");
    model.modes.push_back(std::move(mode));
  }
  model.cells = parse_cells(require(node, "cells", "system"), model.s, model.n, "system cell");
  if (const YAML::Node cont = node["continuity"]) {
    if (!cont.IsSequence() || cont.size() != model.s) fail(cont, "system.continuity must list one matrix per mode");
    std::vector<Matrix> mats;
    for (std::size_t i = 0; i < model.s; ++i) {
      const bool affine = model.cells[i].f.norm_inf() != 0.0;
      const std::size_t cols = affine ? model.n + 1 : model.n;
      mats.push_back(as_matrix_rows(cont[i], cols, "continuity " + std::to_string(i + 1)));
    }
    model.continuity = std::move(mats);
  }
}

void parse_disturbance(const YAML::Node& node, ModelFile& model) {
  const std::string kind = require(node, "kind", "disturbance").as<std::string>();
  if (kind == "zero") {
    check_keys(node, {"kind", "bound"}, "disturbance");
    model.disturbance = DisturbanceSignal::zero(model.n);
  } else if (kind == "constant") {
    check_keys(node, {"kind", "value", "bound"}, "disturbance");
    model.disturbance = DisturbanceSignal::constant(as_vector(require(node, "value", "disturbance"), model.n, "value"));
  } else if (kind == "sinusoid") {
    check_keys(node, {"kind", "offset", "amplitude", "mask", "bound"}, "disturbance");
    model.disturbance = DisturbanceSignal::sinusoid(as_number(require(node, "offset", "disturbance"), "offset"),
                                                    as_number(require(node, "amplitude", "disturbance"), "amplitude"),
                                                    as_vector(require(node, "mask", "disturbance"), model.n, "mask"));
  } else {
    fail(node["kind"], "disturbance kind must be zero, constant or sinusoid");
  }
  model.disturbance_bound = disturbance_sup_norm(model.disturbance);
  if (const YAML::Node bound = node["bound"]) {
    model.disturbance_bound = as_number(bound, "disturbance bound");
    if (model.disturbance_bound < 0.0) fail(bound, "disturbance bound must be nonnegative");
  }
}

void parse_abstraction(const YAML::Node& node, ModelFile& model) {
  check_keys(node, {"kind", "modes", "cells"}, "abstraction");
  const YAML::Node kind = require(node, "kind", "abstraction");
  const std::string k = kind.as<std::string>();
  if (k == "linear") {
    model.abstraction.kind = AbstractionKind::Linear;
  } else if (k == "pwa") {
    model.abstraction.kind = AbstractionKind::Pwa;
  } else {
    fail(kind, "abstraction kind must be linear or pwa");
  }
  const YAML::Node modes = require(node, "modes", "abstraction");
  if (!modes.IsSequence() || modes.size() != model.r) {
    fail(modes, "abstraction.modes must list r = " + std::to_string(model.r) + " modes");
  }
  if (model.abstraction.kind == AbstractionKind::Linear && model.r != 1) {
    fail(modes, "a linear abstraction has exactly one mode");
  }
  for (std::size_t j = 0; j < model.r; ++j) {
    const std::string where = "abstraction mode " + std::to_string(j + 1);
    const YAML::Node mn = modes[j];
    check_keys(mn, {"F", "G", "H", "L"}, where);
    model.abstraction.modes.push_back({as_matrix(require(mn, "F", where), model.m, model.m, where + " F"),
                                       as_matrix(require(mn, "G", where), model.m, model.q, where + " G"),
                                       as_matrix(require(mn, "H", where), model.k, model.m, where + " H"),
                                       as_matrix(require(mn, "L", where), model.q, model.m, where + " L")});
  }
  const YAML::Node cells = node["cells"];
  if (model.abstraction.kind == AbstractionKind::Pwa) {
    if (!cells) fail(node, "a pwa abstraction needs concrete-space cells");
    model.abstraction.cells = parse_cells(cells, model.r, model.n, "abstraction cell");
  } else if (cells) {
    fail(cells, "a linear abstraction takes no cells");
  }
}

void parse_certificate(const YAML::Node& node, ModelFile& model) {
  check_keys(node, {"kappa", "lambda", "modes"}, "certificate");
  const YAML::Node kappa = require(node, "kappa", "certificate");
  model.certificate.kappa = as_number(kappa, "kappa");
  if (!(model.certificate.kappa > 0.0)) fail(kappa, "kappa must be positive");
  if (const YAML::Node lambda = node["lambda"]) {
    model.certificate.lambda = as_number(lambda, "lambda");
    if (!(*model.certificate.lambda > 0.0)) fail(lambda, "lambda must be positive");
  }
  const YAML::Node modes = node["modes"];
  if (!modes) return;
  if (!model.certificate.lambda) fail(node, "certificate modes require lambda");
  if (!modes.IsSequence() || modes.size() != model.s) fail(modes, "certificate.modes must list one form per mode");
  const std::size_t d = model.n + model.m;
  for (std::size_t i = 0; i < model.s; ++i) {
    const std::string where = "certificate mode " + std::to_string(i + 1);
    const YAML::Node cn = modes[i];
    check_keys(cn, {"M", "m", "U", "W", "T", "Jbar"}, where);
    ModeCertificate cert;
    cert.m = as_matrix(require(cn, "M", where), d, d, where + " M");
    if (const YAML::Node ms = cn["m"]) {
      cert.kind = CellKind::Affine;
      cert.m_scalar = as_number(ms, where + " m");
    }
    const std::size_t fd = cert.kind == CellKind::Affine ? d + 1 : d;
    if (const YAML::Node u = cn["U"]) cert.u = as_matrix(u, u.size(), u.size(), where + " U");
    if (const YAML::Node w = cn["W"]) cert.w = as_matrix(w, w.size(), w.size(), where + " W");
    if (const YAML::Node t = cn["T"]) cert.t = as_matrix(t, fd, fd, where + " T");
    if (const YAML::Node j = cn["Jbar"]) cert.jbar = as_matrix(j, fd, fd, where + " Jbar");
    model.certificate.modes.push_back(std::move(cert));
  }
}

void parse_scenario(const YAML::Node& node, ModelFile& model) {
  check_keys(node, {"reconstructed", "x1_0", "x2_0", "reference", "h", "t_end", "x2_sup"}, "scenario");
  auto& sc = model.scenario;
  if (const YAML::Node rec = node["reconstructed"]) sc.reconstructed = as_bool(rec, "reconstructed");
  sc.x1_0 = as_vector(require(node, "x1_0", "scenario"), model.n, "x1_0");
  sc.x2_0 = as_vector(require(node, "x2_0", "scenario"), model.m, "x2_0");
  const YAML::Node h = require(node, "h", "scenario");
  sc.h = as_number(h, "h");
  if (!(sc.h > 0.0)) fail(h, "h must be positive");
  const YAML::Node t_end = require(node, "t_end", "scenario");
  sc.t_end = as_number(t_end, "t_end");
  if (sc.t_end < 0.0) fail(t_end, "t_end must be nonnegative");
  if (const YAML::Node x2s = node["x2_sup"]) sc.x2_sup = as_number(x2s, "x2_sup");
  const YAML::Node ref = require(node, "reference", "scenario");
  if (!ref.IsSequence() || ref.size() == 0) fail(ref, "reference must be a non-empty list of waypoints");
  for (std::size_t w = 0; w < ref.size(); ++w) {
    const std::string where = "reference waypoint " + std::to_string(w + 1);
    check_keys(ref[w], {"t", "value"}, where);
    sc.reference.emplace_back(as_number(require(ref[w], "t", where), where + " t"),
                              as_vector(require(ref[w], "value", where), model.q, where + " value"));
  }
}

ModelFile parse_root(const YAML::Node& root) {
  if (!root.IsMap()) fail(root, "model document must be a mapping");
  check_keys(root, {"name", "dimensions", "system", "disturbance", "abstraction", "certificate", "scenario"}, "model");
  ModelFile model;
  if (const YAML::Node name = root["name"]) model.name = name.as<std::string>();
  parse_dimensions(require(root, "dimensions", "model"), model);
  parse_system(require(root, "system", "model"), model);
  parse_disturbance(require(root, "disturbance", "model"), model);
  parse_abstraction(require(root, "abstraction", "model"), model);
  parse_certificate(require(root, "certificate", "model"), model);
  parse_scenario(require(root, "scenario", "model"), model);
  return model;
}

std::string number(double v) {
  char buf[32];
  for (int digits : {15, 16, 17}) {
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

class Writer {
 public:
  void line(int indent, const std::string& text) {
    out_.append(static_cast<std::size_t>(indent) * 2, ' ');
    out_ += text;
    out_ += '\n';
  }

  static std::string list(const Vector& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ", ";
      s += number(v[i]);
    }
    return s + "]";
  }

  void matrix(int indent, const std::string& key, const Matrix& m) {
    line(indent, key + ":");
    for (std::size_t r = 0; r < m.rows(); ++r) line(indent + 1, "- " + list(m.row_vector(r)));
  }

  /// First key of a list item.
  void item_matrix(int indent, const std::string& key, const Matrix& m) {
    line(indent, "- " + key + ":");
    for (std::size_t r = 0; r < m.rows(); ++r) line(indent + 2, "- " + list(m.row_vector(r)));
  }

  void cell(int indent, const ModelCell& c) {
    item_matrix(indent, "E", c.e);
    line(indent + 1, "f: " + list(c.f));
  }

  std::string str() && { return std::move(out_); }

 private:
  std::string out_;
};

}  // namespace

ModelFile parse_model(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ParseError(static_cast<std::size_t>(std::max(0, e.mark.line)) + 1,
                     static_cast<std::size_t>(std::max(0, e.mark.column)) + 1, e.msg);
  }
  try {
    return parse_root(root);
  } catch (const YAML::Exception& e) {
    throw ParseError(static_cast<std::size_t>(std::max(0, e.mark.line)) + 1,
                     static_cast<std::size_t>(std::max(0, e.mark.column)) + 1, e.msg);
  }
}

ModelFile load_model(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorCode::IoError, "cannot read model file " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_model(ss.str());
}

std::string dump_model(const ModelFile& model) {
  Writer w;
  if (!model.name.empty()) w.line(0, "name: " + model.name);
  w.line(0, "dimensions: {n: " + std::to_string(model.n) + ", p: " + std::to_string(model.p) +
                ", k: " + std::to_string(model.k) + ", m: " + std::to_string(model.m) +
                ", q: " + std::to_string(model.q) + ", s: " + std::to_string(model.s) +
                ", r: " + std::to_string(model.r) + "}");
  w.line(0, "system:");
  w.line(1, "modes:");
  for (const auto& mode : model.modes) {
    w.item_matrix(2, "A", mode.a);
    w.matrix(3, "B", mode.b);
    w.matrix(3, "C", mode.c);
    w.matrix(3, "K", mode.k);
    if (mode.r) w.matrix(3, "R", *mode.r);
    if (mode.p) w.matrix(3, "P", *mode.p);
    if (mode.q) w.matrix(3, "Q", *mode.q);
  }
  w.line(1, "cells:");
  for (const auto& c : model.cells) w.cell(2, c);
  if (model.continuity) {
    w.line(1, "continuity:");
    for (const auto& j : *model.continuity) {
      w.line(2, "-");
      for (std::size_t r = 0; r < j.rows(); ++r) w.line(3, "- " + Writer::list(j.row_vector(r)));
    }
  }

  w.line(0, "disturbance:");
  const auto& d = model.disturbance;
  switch (d.kind()) {
    case DisturbanceSignal::Kind::Zero: w.line(1, "kind: zero"); break;
    case DisturbanceSignal::Kind::Constant:
      w.line(1, "kind: constant");
      w.line(1, "value: " + Writer::list(d.vector()));
      break;
    case DisturbanceSignal::Kind::Sinusoid:
      w.line(1, "kind: sinusoid");
      w.line(1, "offset: " + number(d.offset()));
      w.line(1, "amplitude: " + number(d.amplitude()));
      w.line(1, "mask: " + Writer::list(d.vector()));
      break;
  }
  w.line(1, "bound: " + number(model.disturbance_bound));

  w.line(0, "abstraction:");
  w.line(1, std::string("kind: ") + (model.abstraction.kind == AbstractionKind::Pwa ? "pwa" : "linear"));
  w.line(1, "modes:");
  for (const auto& a : model.abstraction.modes) {
    w.item_matrix(2, "F", a.f);
    w.matrix(3, "G", a.g);
    w.matrix(3, "H", a.h);
    w.matrix(3, "L", a.l);
  }
  if (model.abstraction.kind == AbstractionKind::Pwa) {
    w.line(1, "cells:");
    for (const auto& c : model.abstraction.cells) w.cell(2, c);
  }

  w.line(0, "certificate:");
  w.line(1, "kappa: " + number(model.certificate.kappa));
  if (model.certificate.lambda) w.line(1, "lambda: " + number(*model.certificate.lambda));
  if (!model.certificate.modes.empty()) {
    w.line(1, "modes:");
    for (const auto& c : model.certificate.modes) {
      w.item_matrix(2, "M", c.m);
      if (c.kind == CellKind::Affine) w.line(3, "m: " + number(c.m_scalar));
      if (!c.u.empty()) w.matrix(3, "U", c.u);
      if (!c.w.empty()) w.matrix(3, "W", c.w);
      if (c.t) w.matrix(3, "T", *c.t);
      if (c.jbar) w.matrix(3, "Jbar", *c.jbar);
    }
  }

  const auto& sc = model.scenario;
  w.line(0, "scenario:");
  w.line(1, std::string("reconstructed: ") + (sc.reconstructed ? "true" : "false"));
  w.line(1, "x1_0: " + Writer::list(sc.x1_0));
  w.line(1, "x2_0: " + Writer::list(sc.x2_0));
  w.line(1, "h: " + number(sc.h));
  w.line(1, "t_end: " + number(sc.t_end));
  if (sc.x2_sup) w.line(1, "x2_sup: " + number(*sc.x2_sup));
  w.line(1, "reference:");
  for (const auto& [t, v] : sc.reference) w.line(2, "- {t: " + number(t) + ", value: " + Writer::list(v) + "}");
  return std::move(w).str();
}

void set_certificate(ModelFile& model, const Certificate& cert) {
  model.certificate.kappa = cert.kappa;
  model.certificate.lambda = cert.lambda;
  model.certificate.modes = cert.modes;
}

}  // namespace pwahier
