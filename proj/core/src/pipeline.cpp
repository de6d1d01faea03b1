#include "pwahier/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pwahier/error.hpp"

namespace pwahier {

bool RelationStage::certified() const {
  return std::all_of(maps.begin(), maps.end(), [](const RelationMaps& r) { return r.certified; });
}

bool PreparedModel::certified() const {
  return relations.certified() && std::all_of(lmi.begin(), lmi.end(), [](const LmiReport& r) { return r.feasible; });
}

PwaSystem build_system(const ModelFile& model) {
  std::vector<PwaMode> modes;
  std::vector<Polyhedron> cells;
  for (std::size_t i = 0; i < model.s; ++i) {
    const auto& m = model.modes[i];
    modes.push_back({m.a, m.b, m.c, model.disturbance_bound});
    cells.emplace_back(model.cells[i].e, model.cells[i].f);
  }
  std::optional<std::vector<ContinuityMatrix>> continuity;
  if (model.continuity) {
    continuity.emplace();
    for (std::size_t i = 0; i < model.s; ++i) {
      continuity->push_back({(*model.continuity)[i], classify_cell(cells[i])});
    }
  }
  return PwaSystem(std::move(modes), Partition(std::move(cells)), std::move(continuity));
}

std::vector<Polyhedron> build_abstraction_cells(const ModelFile& model) {
  std::vector<Polyhedron> out;
  for (const auto& c : model.abstraction.cells) out.emplace_back(c.e, c.f);
  return out;
}

namespace {

RelationMaps supplied_relation(const ModelMode& mode, const AbstractionMode& abs) {
  RelationMaps r;
  r.p = *mode.p;
  r.q = *mode.q;
  const auto res = relation_residuals(mode.a, mode.b, mode.c, abs.f, abs.h, r.p, r.q);
  r.residual = std::hypot(res.output, res.dynamics);
  r.tolerance = relation_tolerance(mode.a, abs.h);
  r.certified = r.residual <= r.tolerance;
  return r;
}

}  // namespace

RelationStage solve_model_relations(const ModelFile& model) {
  RelationStage out;
  const auto& abs = model.abstraction.modes;
  if (model.abstraction.kind == AbstractionKind::Linear) {
    for (const auto& mode : model.modes) {
      out.maps.push_back(mode.p ? supplied_relation(mode, abs.front())
                                : solve_relation(mode.a, mode.b, mode.c, abs.front().f, abs.front().h));
      out.pairing.push_back(0);
    }
    return out;
  }

  std::vector<PwaMode> free_modes;
  std::vector<std::size_t> free_index;
  for (std::size_t i = 0; i < model.s; ++i) {
    if (!model.modes[i].p) {
      free_modes.push_back({model.modes[i].a, model.modes[i].b, model.modes[i].c, 0.0});
      free_index.push_back(i);
    }
  }
  Pairing solved;
  if (!free_modes.empty()) solved = solve_relation_pairing(free_modes, abs);
  out.maps.resize(model.s);
  out.pairing.resize(model.s);
  for (std::size_t k = 0; k < free_index.size(); ++k) {
    out.maps[free_index[k]] = solved.maps[k];
    out.pairing[free_index[k]] = solved.abstraction_mode[k];
  }
  for (std::size_t i = 0; i < model.s; ++i) {
    if (!model.modes[i].p) continue;
    std::optional<std::size_t> found;
    for (std::size_t j = 0; j < abs.size() && !found; ++j) {
      auto r = supplied_relation(model.modes[i], abs[j]);
      if (r.certified) {
        found = j;
        out.maps[i] = std::move(r);
      }
    }
    if (!found) {
      throw Error(ErrorCode::NoFeasiblePairing,
                  "supplied P, Q of mode " + std::to_string(i + 1) + " fit no abstraction mode");
    }
    out.pairing[i] = *found;
  }
  return out;
}

PreparedModel prepare_model(const ModelFile& model) {
  PwaSystem system = build_system(model);
  std::vector<Polyhedron> abs_cells = build_abstraction_cells(model);
  if (model.abstraction.kind == AbstractionKind::Linear) {
    LinearAbstraction check(model.abstraction.modes.front());
  } else {
    PwaAbstraction check(model.abstraction.modes, abs_cells);
  }

  RelationStage relations = solve_model_relations(model);
  for (std::size_t i = 0; i < model.s; ++i) {
    if (!relations.maps[i].certified) {
      throw Error(ErrorCode::UncertifiedRelation, "relation of mode " + std::to_string(i + 1) + " has residual " +
                                                      std::to_string(relations.maps[i].residual));
    }
  }

  std::vector<Interface> interfaces;
  std::vector<JointSystem> joints;
  for (std::size_t i = 0; i < model.s; ++i) {
    const std::size_t j = relations.pairing[i];
    const auto& abs = model.abstraction.modes[j];
    interfaces.push_back(make_interface(system.mode(i), abs, relations.maps[i], model.modes[i].k, model.modes[i].r));
    JointCell cell = model.abstraction.kind == AbstractionKind::Linear
                         ? joint_partition_linear(Partition({system.partition().cell(i)}), {relations.maps[i].p}).front()
                         : joint_cell_pair(system.partition().cell(i), abs_cells[j], relations.maps[i].p);
    joints.push_back(
        assemble_joint(system.mode(i), abs, relations.maps[i], interfaces.back(), std::move(cell), i, j));
  }

  Certificate cert;
  bool synthesized = false;
  if (model.certificate.modes.empty()) {
    SynthesisOptions opts;
    if (model.certificate.lambda) opts.lambda_grid = {*model.certificate.lambda};
    cert = synthesize_certificate(joints, model.certificate.kappa, opts);
    synthesized = true;
  } else {
    cert = Certificate{model.certificate.kappa, *model.certificate.lambda, model.certificate.modes};
  }

  std::vector<LmiReport> lmi;
  for (std::size_t i = 0; i < model.s; ++i) {
    if (cert.modes[i].kind != joints[i].kind()) {
      LmiReport bad;
      bad.feasible = false;
      lmi.push_back(bad);
      continue;
    }
    lmi.push_back(verify_lmi(cert.modes[i], cert.lambda, joints[i]));
  }

  return PreparedModel{std::move(system),     model.abstraction.modes, std::move(abs_cells), std::move(relations),
                       std::move(interfaces), std::move(joints),       std::move(cert),      synthesized,
                       std::move(lmi)};
}

Scenario make_scenario(const PreparedModel& prepared, const ModelFile& model) {
  return Scenario{prepared.system,
                  prepared.abstraction,
                  prepared.abstraction_cells,
                  prepared.joints,
                  prepared.certificate,
                  model.disturbance,
                  reference_schedule(model.scenario.reference),
                  model.scenario.x1_0,
                  model.scenario.x2_0,
                  model.scenario.t_end,
                  model.scenario.h,
                  model.scenario.x2_sup};
}

}  // namespace pwahier
