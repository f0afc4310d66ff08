#include <gtest/gtest.h>

#include "imred/imred.hpp"

using namespace imred;

namespace {

void expectSameModel(const FiniteModel& a, const FiniteModel& b, VarIndex vars) {
  ASSERT_EQ(a.worldCount(), b.worldCount());
  ASSERT_EQ(a.pointCount(), b.pointCount());
  EXPECT_EQ(a.kind, b.kind);
  EXPECT_EQ(a.worldNames, b.worldNames);
  EXPECT_EQ(a.pointNames, b.pointNames);
  EXPECT_EQ(a.above, b.above);
  EXPECT_EQ(a.domain, b.domain);
  EXPECT_EQ(a.access, b.access);
  for (VarIndex p = 1; p <= vars; ++p)
    for (std::size_t w = 0; w < a.worldCount(); ++w) EXPECT_EQ(a.truthSet(p, w), b.truthSet(p, w));
}

std::string conditionOf(const std::string& text) {
  try {
    parseModel(text);
  } catch (const ModelError& e) {
    return e.violations().empty() ? e.what() : e.violations().front().condition;
  }
  return "";
}

} // namespace

TEST(ModelIo, ReadsDirectives) {
  ModelFile f = parseModelFile(R"(# two worlds
kind fs
world r
world u
le r u
point r a
point u a
point u b   # new individual
s u a b
val u p2 b
refutes r a
)");
  const FiniteModel& m = f.model;
  EXPECT_EQ(m.worldNames, (std::vector<std::string>{"r", "u"}));
  EXPECT_EQ(m.pointNames, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(m.above, (std::vector<WorldSet>{0b11, 0b10}));
  EXPECT_EQ(m.domain, (std::vector<PointSet>{0b01, 0b11}));
  EXPECT_EQ(m.access[1][0], 0b10u);
  EXPECT_EQ(m.truthSet(2, 1), 0b10u);
  EXPECT_EQ(m.truthSet(2, 0), 0u);
  ASSERT_TRUE(f.refutes);
  EXPECT_EQ(f.refutes->world, 0u);
  EXPECT_EQ(f.refutes->point, 0u);
}

TEST(ModelIo, OrderIsClosed) {
  FiniteModel m = parseModel("world a\nworld b\nworld c\nle a b\nle b c\npoint a x\npoint b x\npoint c x\n");
  EXPECT_TRUE(contains(m.above[0], 2));
}

TEST(ModelIo, RoundTripRandomModels) {
  Rng rng(8);
  RandomModelOptions opt;
  opt.maxWorlds = 5;
  opt.maxPoints = 4;
  opt.vars = 3;
  for (int n = 0; n < 200; ++n) {
    opt.kind = n % 3 ? FrameKind::FS : FrameKind::MIPC;
    FiniteModel m = randomModel(rng, opt);
    FiniteModel back = parseModel(modelToString(m));
    expectSameModel(m, back, 3);
    EXPECT_EQ(modelToString(back), modelToString(m));
  }
}

TEST(ModelIo, CertificateTrailer) {
  FiniteModel m = FiniteModel::blank(1, 2);
  m.domain[0] = 0b11;
  std::ostringstream out;
  writeCertificate(out, m, 0, 1);
  ModelFile f = parseModelFile(out.str());
  ASSERT_TRUE(f.refutes);
  EXPECT_EQ(f.refutes->point, 1u);
}

TEST(ModelIo, SyntaxErrorsCarryLineNumbers) {
  auto messageOf = [](const std::string& text) {
    try {
      parseModel(text);
    } catch (const SyntaxError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  EXPECT_NE(messageOf("world a\nfrobnicate a\n").find("line 2"), std::string::npos);
  EXPECT_NE(messageOf("world a\nle a b\n").find("unknown world 'b'"), std::string::npos);
  EXPECT_NE(messageOf("world a\nworld a\n").find("duplicate world"), std::string::npos);
  EXPECT_NE(messageOf("world a\npoint a x\ns a x y\n").find("unknown point 'y'"), std::string::npos);
  EXPECT_NE(messageOf("world a\npoint a x\nval a q1 x\n").find("expected variable"), std::string::npos);
  EXPECT_NE(messageOf("world a\npoint a\n").find("expects 2"), std::string::npos);
  EXPECT_NE(messageOf("kind s5\n").find("kind must be"), std::string::npos);
}

TEST(ModelIo, SemanticViolationsAreNamed) {
  EXPECT_EQ(conditionOf("world a\nworld b\nle a b\npoint a x\npoint a y\npoint b x\n"), "point-set monotonicity");
  EXPECT_EQ(conditionOf("kind mipc\nworld a\npoint a x\npoint a y\ns a x x\ns a x y\ns a y y\n"), "MIPC totality");
  EXPECT_EQ(conditionOf("world a\nworld b\nle a b\nle b a\npoint a x\npoint b x\n"), "R antisymmetry");
  EXPECT_EQ(conditionOf("world a\nworld b\nle a b\npoint a x\npoint b x\nval a p1 x\n"), "valuation monotonicity");
  EXPECT_EQ(conditionOf("world a\npoint a x\nworld b\npoint b y\ns a x y\n"), "relation within points");
  EXPECT_EQ(conditionOf(""), "nonempty world set");
  EXPECT_NE(conditionOf("world a\npoint a x\nworld b\npoint b y\nrefutes a y\n").find("refutes"), std::string::npos);
}

TEST(ModelIo, DefaultKind) {
  const std::string text = "world a\npoint a x\npoint a y\ns a x y\n";
  EXPECT_EQ(parseModel(text).kind, FrameKind::FS);
  EXPECT_THROW(parseModel(text, FrameKind::MIPC), ModelError);
}
