// imred/model_io.hpp :: line-oriented model files
//
//   kind fs|mipc                 optional, defaults to the caller's choice
//   world <id>                   declare a world
//   le <id> <id>                 w <= v; the order is closed reflexively and transitively
//   point <world> <id>           add a point to the domain of a world
//   s <world> <id> <id>          add a pair to S_w
//   val <world> p<k> <point>     put the point into V(w, p_k)
//   refutes <world> <point>      certificate trailer
//   # ...                        comment
//
// Point ids are global: the same id in two worlds is the same point.

#ifndef IMRED_MODEL_IO_HPP
#define IMRED_MODEL_IO_HPP

#include <cctype>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "model.hpp"
#include "syntax.hpp"

namespace imred {

struct ModelFile {
  FiniteModel model;
  std::optional<Cell> refutes;
};

namespace detail {

  class ModelReader {
  public:
    explicit ModelReader(FrameKind defaultKind) { model_.kind = defaultKind; }

    ModelFile read(std::string_view text) {
      std::size_t offset = 0;
      std::size_t lineNo = 0;
      while (offset <= text.size()) {
        std::size_t end = text.find('\n', offset);
        if (end == std::string_view::npos) end = text.size();
        ++lineNo;
        line(text.substr(offset, end - offset), offset, lineNo);
        offset = end + 1;
      }
      finish();
      return {std::move(model_), refutes_};
    }

  private:
    struct Token {
      std::string text;
      std::size_t begin;
    };

    void line(std::string_view raw, std::size_t base, std::size_t lineNo) {
      if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
      std::vector<Token> toks;
      std::size_t i = 0;
      while (i < raw.size()) {
        while (i < raw.size() && std::isspace(static_cast<unsigned char>(raw[i]))) ++i;
        std::size_t start = i;
        while (i < raw.size() && !std::isspace(static_cast<unsigned char>(raw[i]))) ++i;
        if (i > start) toks.push_back({std::string(raw.substr(start, i - start)), base + start});
      }
      if (toks.empty()) return;
      lineNo_ = lineNo;
      lineSpan_ = {base, base + raw.size()};
      const std::string& kw = toks[0].text;
      auto arity = [&](std::size_t n) {
        if (toks.size() != n + 1) fail("'" + kw + "' expects " + std::to_string(n) + " argument(s)");
      };
      if (kw == "kind") {
        arity(1);
        if (toks[1].text == "fs") model_.kind = FrameKind::FS;
        else if (toks[1].text == "mipc") model_.kind = FrameKind::MIPC;
        else fail("kind must be 'fs' or 'mipc'");
      } else if (kw == "world") {
        arity(1);
        if (worlds_.count(toks[1].text)) fail("duplicate world '" + toks[1].text + "'");
        if (model_.worldNames.size() >= kMaxWorlds) fail("too many worlds (max 64)");
        worlds_[toks[1].text] = model_.worldNames.size();
        model_.worldNames.push_back(toks[1].text);
        model_.above.push_back(0);
        model_.domain.push_back(0);
        model_.access.emplace_back(model_.pointNames.size(), 0);
        for (auto& [p, sets] : model_.valuation) sets.push_back(0);
      } else if (kw == "le") {
        arity(2);
        std::size_t w = world(toks[1]), v = world(toks[2]);
        model_.above[w] |= bit(v);
      } else if (kw == "point") {
        arity(2);
        std::size_t w = world(toks[1]);
        model_.domain[w] |= bit(point(toks[2], true));
      } else if (kw == "s") {
        arity(3);
        std::size_t w = world(toks[1]);
        std::size_t x = point(toks[2], false), y = point(toks[3], false);
        model_.access[w][x] |= bit(y);
      } else if (kw == "val") {
        arity(3);
        std::size_t w = world(toks[1]);
        VarIndex p = variable(toks[2]);
        std::size_t x = point(toks[3], false);
        auto& sets = model_.valuation[p];
        sets.resize(model_.worldNames.size(), 0);
        sets[w] |= bit(x);
      } else if (kw == "refutes") {
        arity(2);
        refutes_ = Cell{world(toks[1]), point(toks[2], false)};
      } else {
        fail("unknown directive '" + kw + "'");
      }
    }

    std::size_t world(const Token& t) {
      auto it = worlds_.find(t.text);
      if (it == worlds_.end()) fail("unknown world '" + t.text + "'", t);
      return it->second;
    }

    std::size_t point(const Token& t, bool declare) {
      if (auto it = points_.find(t.text); it != points_.end()) return it->second;
      if (!declare) fail("unknown point '" + t.text + "'", t);
      if (model_.pointNames.size() >= kMaxPoints) fail("too many points (max 64)", t);
      std::size_t id = model_.pointNames.size();
      points_[t.text] = id;
      model_.pointNames.push_back(t.text);
      for (auto& row : model_.access) row.push_back(0);
      return id;
    }

    VarIndex variable(const Token& t) {
      Formula f = [&] {
        try {
          return parseFormula(t.text);
        } catch (const SyntaxError&) {
          fail("expected variable p<k>, got '" + t.text + "'", t);
        }
      }();
      if (f.kind() != Connective::Var) fail("expected variable p<k>, got '" + t.text + "'", t);
      return f.varIndex();
    }

    void finish() {
      model_.closeOrder();
      auto violations = validateModel(model_);
      if (!violations.empty()) throw ModelError(std::move(violations));
      if (refutes_ && !contains(model_.domain[refutes_->world], refutes_->point))
        throw ModelError("refutes: point " + model_.pointNames[refutes_->point] + " is not in world " +
                         model_.worldNames[refutes_->world]);
    }

    [[noreturn]] void fail(const std::string& message) {
      throw SyntaxError("line " + std::to_string(lineNo_) + ": " + message, lineSpan_);
    }
    [[noreturn]] void fail(const std::string& message, const Token& t) {
      throw SyntaxError("line " + std::to_string(lineNo_) + ": " + message, {t.begin, t.begin + t.text.size()});
    }

    FiniteModel model_;
    std::optional<Cell> refutes_;
    std::unordered_map<std::string, std::size_t> worlds_, points_;
    std::size_t lineNo_ = 0;
    SourceSpan lineSpan_;
  };

} // namespace detail

// Throws SyntaxError for malformed text and ModelError naming the violated
// condition for a well-formed file that does not describe an FS/MIPC-model.
inline ModelFile parseModelFile(std::string_view text, FrameKind defaultKind = FrameKind::FS) {
  return detail::ModelReader(defaultKind).read(text);
}

inline FiniteModel parseModel(std::string_view text, FrameKind defaultKind = FrameKind::FS) {
  return parseModelFile(text, defaultKind).model;
}

// R is written as its strict pairs; the output reads back to the same model.
inline void writeModel(std::ostream& out, const FiniteModel& m) {
  out << "kind " << toString(m.kind) << '\n';
  for (const auto& w : m.worldNames) out << "world " << w << '\n';
  for (std::size_t w = 0; w < m.worldCount(); ++w)
    forEachMember(m.above[w] & ~bit(w), [&](std::size_t v) { out << "le " << m.worldNames[w] << ' ' << m.worldNames[v] << '\n'; });
  // point-major, so point ids are assigned in the same order on reading
  for (std::size_t x = 0; x < m.pointCount(); ++x)
    for (std::size_t w = 0; w < m.worldCount(); ++w)
      if (contains(m.domain[w], x)) out << "point " << m.worldNames[w] << ' ' << m.pointNames[x] << '\n';
  for (std::size_t w = 0; w < m.worldCount(); ++w)
    for (std::size_t x = 0; x < m.pointCount(); ++x)
      forEachMember(m.access[w][x], [&](std::size_t y) {
        out << "s " << m.worldNames[w] << ' ' << m.pointNames[x] << ' ' << m.pointNames[y] << '\n';
      });
  for (const auto& [p, sets] : m.valuation)
    for (std::size_t w = 0; w < m.worldCount(); ++w)
      forEachMember(sets[w], [&](std::size_t x) {
        out << "val " << m.worldNames[w] << " p" << p << ' ' << m.pointNames[x] << '\n';
      });
}

inline void writeCertificate(std::ostream& out, const FiniteModel& m, WorldId w, PointId x) {
  writeModel(out, m);
  out << "refutes " << m.worldNames[w] << ' ' << m.pointNames[x] << '\n';
}

inline std::string modelToString(const FiniteModel& m) {
  std::ostringstream out;
  writeModel(out, m);
  return out.str();
}

} // namespace imred

#endif
