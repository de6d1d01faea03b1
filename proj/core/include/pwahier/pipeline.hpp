#ifndef PWAHIER_PIPELINE_HPP
#define PWAHIER_PIPELINE_HPP

#include <cstddef>
#include <vector>

#include "pwahier/certificate.hpp"
#include "pwahier/model_file.hpp"
#include "pwahier/relation.hpp"
#include "pwahier/simulator.hpp"
#include "pwahier/systems.hpp"

namespace pwahier {

/// Relation maps and the abstraction mode paired with each concrete mode.
struct RelationStage {
  std::vector<RelationMaps> maps;
  std::vector<std::size_t> pairing;

  bool certified() const;
};

/// Solves (or checks supplied) relations. Never throws for uncertified
/// residuals; NoFeasiblePairing when a PWA mode has no certified partner.
RelationStage solve_model_relations(const ModelFile& model);

PwaSystem build_system(const ModelFile& model);
std::vector<Polyhedron> build_abstraction_cells(const ModelFile& model);

/// Everything a scenario needs, built from a model document.
struct PreparedModel {
  PwaSystem system;
  std::vector<AbstractionMode> abstraction;
  std::vector<Polyhedron> abstraction_cells;
  RelationStage relations;
  std::vector<Interface> interfaces;
  std::vector<JointSystem> joints;
  Certificate certificate;
  bool synthesized = false;
  std::vector<LmiReport> lmi;

  bool certified() const;
};

/// Validates the abstraction, solves relations, builds interfaces and joint
/// systems, then synthesizes or verifies the certificate. Throws
/// UncertifiedRelation, NoFeasiblePairing, NotHurwitz or SynthesisFailed.
PreparedModel prepare_model(const ModelFile& model);

Scenario make_scenario(const PreparedModel& prepared, const ModelFile& model);

}  // namespace pwahier

#endif  // PWAHIER_PIPELINE_HPP
