#include <gtest/gtest.h>

#include "pwahier/pipeline.hpp"
#include "pwahier/systems.hpp"
#include "test_support.hpp"

namespace pwahier {
namespace {

TEST(DisturbanceProperty, SamplesNeverExceedSupNorm) {
  test::Rng rng(301);
  std::vector<DisturbanceSignal> signals{test::load_case(1).disturbance, test::load_case(2).disturbance,
                                         DisturbanceSignal::zero(3),
                                         DisturbanceSignal::constant(test::random_vector(rng, 4))};
  for (int k = 0; k < 5; ++k) {
    signals.push_back(DisturbanceSignal::sinusoid(test::uniform(rng), test::uniform(rng), test::random_vector(rng, 3)));
  }
  for (const auto& d : signals) {
    const double sup = disturbance_sup_norm(d);
    double seen = 0.0;
    for (int k = 0; k < 10000; ++k) {
      const double t = test::uniform(rng, 0, 100);
      const double v = disturbance_value(d, t).norm_inf();
      ASSERT_LE(v, sup + 1e-15);
      seen = std::max(seen, v);
    }
    EXPECT_GE(seen, 0.99 * sup);
  }
}

TEST(SerializationProperty, SystemRoundTripIsLossless) {
  for (int which : {1, 2}) {
    const ModelFile model = test::load_case(which);
    const PwaSystem sys = build_system(model);
    ModelFile rebuilt = model;
    for (std::size_t i = 0; i < sys.num_modes(); ++i) {
      rebuilt.modes[i].a = sys.mode(i).a;
      rebuilt.modes[i].b = sys.mode(i).b;
      rebuilt.modes[i].c = sys.mode(i).c;
      rebuilt.cells[i] = ModelCell{sys.partition().cell(i).e(), sys.partition().cell(i).f()};
    }
    const std::string text = dump_model(rebuilt);
    EXPECT_EQ(text, dump_model(model));
    const PwaSystem again = build_system(parse_model(text));
    for (std::size_t i = 0; i < sys.num_modes(); ++i) {
      EXPECT_EQ(again.mode(i).a, sys.mode(i).a);
      EXPECT_EQ(again.mode(i).b, sys.mode(i).b);
      EXPECT_EQ(again.mode(i).c, sys.mode(i).c);
      EXPECT_EQ(again.mode(i).c_bound, sys.mode(i).c_bound);
      EXPECT_EQ(again.partition().cell(i).e(), sys.partition().cell(i).e());
      EXPECT_EQ(again.partition().cell(i).f(), sys.partition().cell(i).f());
    }
  }
}

TEST(SerializationProperty, RandomMatricesRoundTrip) {
  test::Rng rng(302);
  ModelFile model = test::load_case(2);
  for (auto& mode : model.modes) {
    mode.a = test::random_matrix(rng, 4, 4, 1e3);
    mode.k = test::random_matrix(rng, 2, 4, 1e-7);
  }
  const ModelFile back = parse_model(dump_model(model));
  for (std::size_t i = 0; i < model.modes.size(); ++i) {
    EXPECT_EQ(back.modes[i].a, model.modes[i].a);
    EXPECT_EQ(back.modes[i].k, model.modes[i].k);
  }
}

}  // namespace
}  // namespace pwahier
