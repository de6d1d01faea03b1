#ifndef PWAHIER_MODEL_FILE_HPP
#define PWAHIER_MODEL_FILE_HPP

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pwahier/certificate.hpp"
#include "pwahier/error.hpp"
#include "pwahier/linalg.hpp"
#include "pwahier/systems.hpp"

namespace pwahier {

/// ParseError with the 1-based position of the offending node.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : Error(ErrorCode::ParseError, "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

struct ModelCell {
  Matrix e;
  Vector f;
};

struct ModelMode {
  Matrix a;
  Matrix b;
  Matrix c;
  Matrix k;
  std::optional<Matrix> r;
  /// Relation maps supplied directly; solved for when absent.
  std::optional<Matrix> p;
  std::optional<Matrix> q;
};

enum class AbstractionKind { Linear, Pwa };

struct ModelAbstraction {
  AbstractionKind kind = AbstractionKind::Linear;
  std::vector<AbstractionMode> modes;
  std::vector<ModelCell> cells;  // concrete-space cells, PWA only
};

struct ModelCertificate {
  double kappa = 1.0;
  std::optional<double> lambda;
  /// Per-mode forms; synthesized when empty.
  std::vector<ModeCertificate> modes;
};

struct ModelScenario {
  bool reconstructed = false;
  Vector x1_0;
  Vector x2_0;
  std::vector<std::pair<double, Vector>> reference;
  double h = 1e-3;
  double t_end = 0.0;
  std::optional<double> x2_sup;
};

/// Parsed model document. Dimensions n, p, k (concrete state, input, output),
/// m, q (abstraction state, input), s, r (concrete and abstraction mode counts).
struct ModelFile {
  std::string name;
  std::size_t n = 0, p = 0, k = 0, m = 0, q = 0, s = 0, r = 0;
  std::vector<ModelMode> modes;
  std::vector<ModelCell> cells;
  std::optional<std::vector<Matrix>> continuity;
  DisturbanceSignal disturbance;
  double disturbance_bound = 0.0;
  ModelAbstraction abstraction;
  ModelCertificate certificate;
  ModelScenario scenario;
};

/// Parses and dimension-checks a model document. Throws ParseError.
ModelFile parse_model(const std::string& text);
/// Reads and parses a file. IoError when unreadable.
ModelFile load_model(const std::filesystem::path& path);
/// Serializes with 17 significant digits, so parse_model(dump_model(x))
/// reproduces every entry exactly.
std::string dump_model(const ModelFile& model);

/// Replaces the certificate block (used to persist synthesized forms).
void set_certificate(ModelFile& model, const Certificate& cert);

}  // namespace pwahier

#endif  // PWAHIER_MODEL_FILE_HPP
