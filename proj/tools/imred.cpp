// imred :: command-line front end
//
// Exit codes: 0 true / consistent / audit passed, 1 refuted / audit failed,
// 2 usage or input error.  Records are tab-separated, one per line.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "imred/imred.hpp"

using namespace imred;

namespace {

constexpr int kOk = 0;
constexpr int kRefuted = 1;
constexpr int kError = 2;

const char* kGeneratorHelp =
    "Corpus generator: formula i targets a length drawn uniformly from "
    "[10, --max-length] and is grown as a random tree over p1..p3 with "
    "connective weights var 6, false 1, & 2, | 2, -> 3, <> 1.5, [] 1.5 "
    "(Mersenne Twister 64, seeded by --seed).";

struct Options {
  // translate
  std::string formula;
  std::string stage = "full";
  bool summary = false;
  // family
  std::string letter;
  std::size_t level = 0;
  std::uint64_t index = 0;
  std::vector<std::uint64_t> g;
  std::uint64_t ginv = 0;
  std::size_t count = 0;
  bool wantCount = false;
  // check / refute
  std::string modelPath;
  bool global = false;
  bool mipc = false;
  bool fs = false;
  std::size_t maxWorlds = 2, maxPoints = 2;
  VarIndex vars = 0;
  unsigned threads = 1;
  std::uint64_t candidateCap = 0;
  // audit / bench
  std::uint64_t spiral = 0;
  bool lengths = false;
  std::size_t maxLevel = 6;
  bool sizes = false;
  bool stability = false;
  std::size_t corpus = 200;
  std::uint64_t seed = 7;
  std::uint64_t maxLength = 1000;
};

FrameKind kindOf(const Options& o) { return o.mipc ? FrameKind::MIPC : FrameKind::FS; }

std::string readFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void reportSyntaxError(const std::string& text, const SyntaxError& e) {
  std::cerr << "error: " << e.what() << '\n';
  if (e.span().begin <= text.size() && text.find('\n') == std::string::npos) {
    std::cerr << "  " << text << "\n  " << std::string(e.span().begin, ' ')
              << std::string(std::max<std::size_t>(1, e.span().end - e.span().begin), '^') << '\n';
  }
}

int cmdTranslate(const Options& o) {
  Formula phi = parseFormula(o.formula);
  auto line = [](const char* key, const auto& value) { std::cout << key << '\t' << value << '\n'; };
  auto formulaLine = [&](const char* key, const Formula& f) {
    if (o.summary) line(key, "length=" + std::to_string(f.length()) + " dag=" + std::to_string(dagSize(f)));
    else line(key, printFormula(f));
  };
  line("input", printFormula(phi));
  line("length_in", phi.length());

  if (o.stage == "positive") {
    PositiveEmbedding e = positiveEmbed(phi);
    line("fresh", "p" + std::to_string(e.fresh));
    formulaLine("F", e.guard);
    formulaLine("phi_f", e.replaced);
    formulaLine("embedded", e.embedded);
    line("length_embedded", e.embedded.length());
    return kOk;
  }
  if (o.stage == "star") {
    if (!phi.isPositive()) throw std::invalid_argument("star stage needs a positive formula (no 'false')");
    StarResult s = starDetailed(phi);
    line("l0", baseLength());
    line("k0", stabilityLevel());
    line("level", s.level);
    for (auto [from, to] : s.renaming) line("rename", "p" + std::to_string(from) + "\t" + std::to_string(to));
    formulaLine("output", s.formula);
    line("length_out", s.formula.length());
    return kOk;
  }
  TranslationReport r = reduceToOneVar(phi);
  line("fresh", "p" + std::to_string(r.positive.fresh));
  formulaLine("embedded", r.positive.embedded);
  line("length_embedded", r.positive.embedded.length());
  line("l0", r.baseLength);
  line("k0", r.stabilityLevel);
  line("k_phi", r.targetLevel);
  line("level", r.starred.level);
  formulaLine("output", r.output());
  line("length_out", r.output().length());
  line("dag_out", dagSize(r.output()));
  line("bound", r.sizeBound.str());
  std::cout << "bound_ok=" << (r.boundOk ? "true" : "false") << '\n';
  return r.boundOk ? kOk : kRefuted;
}

int cmdFamily(const Options& o) {
  if (!o.g.empty()) {
    std::cout << spiralIndex(o.g[0], o.g[1]) << '\n';
    return kOk;
  }
  if (o.ginv) {
    GridCell c = spiralCell(o.ginv);
    std::cout << '(' << c.i << ',' << c.j << ")\n";
    return kOk;
  }
  if (o.wantCount) {
    std::cout << "n" << o.count << '\t' << levelCount(o.count).str() << '\n';
    return kOk;
  }
  if (o.letter.empty() || !o.index) throw std::invalid_argument("expected: family A|B <level> <index>");
  Letter letter;
  if (o.letter == "A" || o.letter == "a") letter = Letter::A;
  else if (o.letter == "B" || o.letter == "b") letter = Letter::B;
  else throw std::invalid_argument("family letter must be A or B");
  Formula f = familyFormula({o.level, letter, o.index});
  if (o.summary) std::cout << "length\t" << f.length() << "\tdag\t" << dagSize(f) << '\n';
  else std::cout << f << '\n';
  return kOk;
}

int cmdCheck(const Options& o) {
  const std::string text = readFile(o.modelPath);
  FiniteModel m;
  try {
    m = parseModel(text, kindOf(o));
  } catch (const SyntaxError& e) {
    throw std::runtime_error(o.modelPath + ": " + e.what());
  }
  if (o.mipc && m.kind != FrameKind::MIPC) {
    m.kind = FrameKind::MIPC;
    requireValid(m);
  }
  Formula phi = parseFormula(o.formula);
  ModelChecker checker(m);
  if (o.global) {
    bool ok = checker.trueInModel(phi);
    std::cout << (ok ? "true" : "false") << '\n';
    return ok ? kOk : kRefuted;
  }
  const auto& truth = checker.truthSets(phi);
  bool all = true;
  for (const Cell& c : cellsOf(m)) {
    bool v = contains(truth[c.world], c.point);
    all = all && v;
    std::cout << m.worldNames[c.world] << '\t' << m.pointNames[c.point] << '\t' << (v ? "true" : "false") << '\n';
  }
  return all ? kOk : kRefuted;
}

int cmdRefute(const Options& o) {
  Formula phi = parseFormula(o.formula);
  SearchBudget b;
  b.maxWorlds = o.maxWorlds;
  b.maxPoints = o.maxPoints;
  b.varBound = o.vars ? o.vars : std::max<VarIndex>(1, phi.maxVar());
  b.threads = o.threads;
  if (o.candidateCap) b.candidateCap = o.candidateCap;
  if (const char* cap = std::getenv("IMRED_TIME_CAP_MS")) b.timeCap = std::chrono::milliseconds(std::stoull(cap));
  RefutationResult r = findCountermodel(phi, b, kindOf(o));
  const auto& s = r.stats;
  std::cout << "budget\t" << toString(kindOf(o)) << '\t' << describe(b) << '\n';
  if (r.refuted()) {
    const auto& cm = *r.countermodel;
    std::cout << "refuted\t" << cm.model.worldNames[cm.world] << '\t' << cm.model.pointNames[cm.point] << '\n';
    writeCertificate(std::cout, cm.model, cm.world, cm.point);
  } else {
    std::cout << "exhausted" << (s.complete ? "" : "\tincomplete: " + s.stopReason) << '\n';
  }
  std::cout << "frames\t" << s.frames << "\nvaluations\t" << s.valuations << '\n';
  return r.refuted() ? kRefuted : kOk;
}

// Spiral walk from the arrow description: shells alternate direction.
bool auditSpiral(std::uint64_t limit) {
  std::uint64_t i = 2, j = 2, r = 1;
  for (std::uint64_t s = 3; r <= limit; ++s) {
    auto step = [&](std::uint64_t ni, std::uint64_t nj) {
      if (r > limit) return true;
      GridCell c = spiralCell(r);
      if (c.i != i || c.j != j || spiralIndex(i, j) != r) {
        std::cout << "spiral\tFAIL\trank " << r << " walk (" << i << ',' << j << ") computed (" << c.i << ','
                  << c.j << ")\n";
        return false;
      }
      i = ni, j = nj, ++r;
      return true;
    };
    if (s % 2 == 1) {
      if (!step(i + 1, j)) return false;                                    // right onto shell s
      for (std::uint64_t t = 0; t < s - 2; ++t) if (!step(i, j + 1)) return false;
      for (std::uint64_t t = 0; t < s - 2; ++t) if (!step(i - 1, j)) return false;
    } else {
      if (!step(i, j + 1)) return false;
      for (std::uint64_t t = 0; t < s - 2; ++t) if (!step(i + 1, j)) return false;
      for (std::uint64_t t = 0; t < s - 2; ++t) if (!step(i, j - 1)) return false;
    }
  }
  std::cout << "spiral\tpass\tranks 1.." << limit << '\n';
  return true;
}

bool auditLengths(std::size_t maxLevel, std::uint64_t seed) {
  FamilyBuilder fam(1);
  Rng rng(seed);
  const BigNat l0 = baseLength();
  std::uint64_t checked = 0;
  for (std::size_t k = 0; k <= maxLevel; ++k) {
    const BigNat bound = l0 * pow5(k);
    const BigNat n = levelCount(k);
    std::vector<std::uint64_t> indices;
    if (k <= 3) {
      for (std::uint64_t i = 1; i <= n; ++i) indices.push_back(i);
    } else {
      const std::uint64_t top = n > BigNat(std::numeric_limits<std::uint64_t>::max())
                                    ? std::numeric_limits<std::uint64_t>::max()
                                    : static_cast<std::uint64_t>(n);
      for (int t = 0; t < 100; ++t) indices.push_back(std::uniform_int_distribution<std::uint64_t>(1, top)(rng));
    }
    for (std::uint64_t i : indices)
      for (Letter L : {Letter::A, Letter::B}) {
        FamilyId id{k, L, i};
        Formula f = fam(id);
        ++checked;
        if (!(BigNat(f.length()) < bound)) {
          std::cout << "lengths\tFAIL\t" << toString(id) << "\tlength " << f.length() << " >= " << bound << '\n';
          return false;
        }
      }
  }
  std::cout << "lengths\tpass\tlevels 0.." << maxLevel << "\tformulas " << checked << "\tseed " << seed << '\n';
  return true;
}

bool auditStability() {
  StabilityCertificate c = stabilityCertificate();
  const BigNat l0 = baseLength();
  for (std::size_t k = c.k0; k <= c.k0 + 10; ++k)
    if (!(levelCount(k) > l0 * pow5(k))) {
      std::cout << "stability\tFAIL\tk " << k << '\n';
      return false;
    }
  std::cout << "stability\tpass\tk0 " << c.k0 << "\tn_k0 " << c.countAtK0 << "\tl0*5^k0 " << c.thresholdAtK0
            << '\n';
  return true;
}

bool auditSizes(std::size_t count, std::uint64_t seed, std::uint64_t maxLength) {
  CorpusOptions opt;
  opt.count = count;
  opt.maxLength = maxLength;
  auto corpus = randomCorpus(seed, opt);
  for (std::size_t n = 0; n < corpus.size(); ++n) {
    TranslationReport r = reduceToOneVar(corpus[n]);
    const Formula& out = r.output();
    if (!r.boundOk || !out.isPositive() || varset(out) != VarSet{1}) {
      std::cout << "sizes\tFAIL\tformula " << n << '\t' << corpus[n] << "\tlength_out " << out.length()
                << "\tbound " << r.sizeBound << '\n';
      return false;
    }
  }
  std::cout << "sizes\tpass\tcorpus " << count << "\tseed " << seed << "\tmax_length " << maxLength << '\n';
  return true;
}

int cmdAudit(const Options& o) {
  bool any = o.spiral || o.lengths || o.sizes || o.stability;
  bool ok = true;
  if (!any || o.spiral) ok = auditSpiral(o.spiral ? o.spiral : 10000) && ok;
  if (!any || o.lengths) ok = auditLengths(o.maxLevel, o.seed) && ok;
  if (!any || o.stability) ok = auditStability() && ok;
  if (!any || o.sizes) ok = auditSizes(o.corpus, o.seed, o.maxLength) && ok;
  return ok ? kOk : kRefuted;
}

int cmdBench(const Options& o) {
  Rng rng(o.seed);
  RandomFormulaOptions fopt;
  std::vector<double> xs, ys;
  std::cout << "seed\t" << o.seed << '\n';
  for (std::uint64_t target : {100ull, 1000ull, 10000ull}) {
    std::vector<Formula> batch;
    for (std::size_t i = 0; i < 5; ++i) batch.push_back(randomFormulaOfLength(rng, fopt, target));
    auto t0 = std::chrono::steady_clock::now();
    std::uint64_t out = 0;
    for (const Formula& f : batch) out += reduceToOneVar(f).output().length();
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / batch.size();
    std::cout << "length\t" << target << "\tseconds\t" << secs << "\tmean_length_out\t" << out / batch.size() << '\n';
    xs.push_back(std::log(static_cast<double>(target)));
    ys.push_back(std::log(std::max(secs, 1e-9)));
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) mx += xs[i] / xs.size(), my += ys[i] / ys.size();
  double num = 0, den = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) num += (xs[i] - mx) * (ys[i] - my), den += (xs[i] - mx) * (xs[i] - mx);
  std::cout << "loglog_slope\t" << num / den << '\n';
  return kOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reduction of FS/MIPC to their positive one-variable fragments"};
  app.require_subcommand(1);
  Options o;

  auto kindFlags = [&](CLI::App* c) {
    auto* m = c->add_flag("--mipc", o.mipc, "MIPC frames (S_w total)");
    auto* f = c->add_flag("--fs", o.fs, "FS frames (default)");
    m->excludes(f);
  };

  auto* translate = app.add_subcommand("translate", "positive embedding and one-variable reduction");
  translate->add_option("formula", o.formula, "formula, e.g. \"<>(p1 | p2) -> <>p1\"")->required();
  translate->add_option("--stage", o.stage, "positive | star | full")
      ->check(CLI::IsMember({"positive", "star", "full"}));
  translate->add_flag("--summary", o.summary, "print lengths and DAG sizes instead of formulas");

  auto* family = app.add_subcommand("family", "family formulas A^k_i, B^k_i and the spiral enumeration");
  family->add_option("letter", o.letter, "A or B");
  family->add_option("level", o.level, "level k");
  family->add_option("index", o.index, "index i, 1 <= i <= n_k");
  family->add_option("--g", o.g, "spiral rank of cell (i, j)")->expected(2);
  family->add_option("--ginv", o.ginv, "cell of spiral rank r")->check(CLI::PositiveNumber);
  auto* countOpt = family->add_option("--count", o.count, "n_k in full precision");
  family->add_flag("--summary", o.summary, "print length and DAG size only");

  auto* check = app.add_subcommand("check", "evaluate a formula on a model file");
  check->add_option("model", o.modelPath, "model file")->required()->check(CLI::ExistingFile);
  check->add_option("formula", o.formula, "formula")->required();
  check->add_flag("--global", o.global, "single verdict: true at every world and point");
  kindFlags(check);

  auto* refute = app.add_subcommand("refute", "bounded countermodel search (refutation only)");
  refute->add_option("formula", o.formula, "formula")->required();
  refute->add_option("--max-worlds", o.maxWorlds, "worlds, 1..8")->check(CLI::Range(1, 8));
  refute->add_option("--max-points", o.maxPoints, "points, 1..8")->check(CLI::Range(1, 8));
  refute->add_option("--vars", o.vars, "valuate p1..pN (default: largest variable)");
  refute->add_option("--threads", o.threads, "worker threads")->check(CLI::Range(1u, 256u));
  refute->add_option("--cap", o.candidateCap, "stop after this many frames");
  refute->footer("IMRED_TIME_CAP_MS caps the search time.  'exhausted' is not a validity proof.");
  kindFlags(refute);

  auto* audit = app.add_subcommand("audit", "spiral, family length, stability and size-bound audits");
  audit->add_option("--spiral", o.spiral, "check the spiral bijection up to this rank");
  audit->add_flag("--lengths", o.lengths, "family length audit |A^k_i|, |B^k_i| < l0 * 5^k");
  audit->add_option("--max-level", o.maxLevel, "deepest level for the length audit")->check(CLI::Range(0, 12));
  audit->add_flag("--stability", o.stability, "k0 certificate");
  audit->add_flag("--sizes", o.sizes, "quadratic size bound over a random corpus");
  audit->add_option("--corpus", o.corpus, "corpus size");
  audit->add_option("--seed", o.seed, "random seed");
  audit->add_option("--max-length", o.maxLength, "largest target formula length")->check(CLI::Range(10, 1000000));
  audit->footer(std::string("With no item flag every audit runs.  Levels above 3 sample 100 random indices.\n") +
                kGeneratorHelp);

  auto* bench = app.add_subcommand("bench", "reduction runtime at lengths 10^2, 10^3, 10^4");
  bench->add_option("--seed", o.seed, "random seed");
  bench->footer(kGeneratorHelp);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kError;
  }

  o.wantCount = countOpt->count() > 0;
  try {
    if (*translate) return cmdTranslate(o);
    if (*family) return cmdFamily(o);
    if (*check) return cmdCheck(o);
    if (*refute) return cmdRefute(o);
    if (*audit) return cmdAudit(o);
    if (*bench) return cmdBench(o);
  } catch (const SyntaxError& e) {
    reportSyntaxError(o.formula, e);
  } catch (const ModelError& e) {
    std::cerr << "error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
  }
  return kError;
}
