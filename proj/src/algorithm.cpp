#include "wlkit/algorithm.hpp"

#include <cctype>
#include <charconv>
#include <limits>
#include <stdexcept>

namespace wlkit {

AlgorithmSpec AlgorithmSpec::one_wl() { return {}; }

AlgorithmSpec AlgorithmSpec::kwl(std::uint32_t k) {
  AlgorithmSpec s;
  s.kind = Algorithm::KWL;
  s.k = k;
  return s;
}

AlgorithmSpec AlgorithmSpec::kfwl(std::uint32_t k) {
  AlgorithmSpec s;
  s.kind = Algorithm::KFWL;
  s.k = k;
  return s;
}

AlgorithmSpec AlgorithmSpec::ktfwl(std::uint32_t k, std::uint32_t t) {
  AlgorithmSpec s;
  s.kind = Algorithm::KTFWL;
  s.k = k;
  s.t = t;
  return s;
}

AlgorithmSpec AlgorithmSpec::ktfwl_plus(std::uint32_t k, std::uint32_t t, EquivariantSetSpec es) {
  AlgorithmSpec s;
  s.kind = Algorithm::KTFWLPlus;
  s.k = k;
  s.t = t;
  s.es = std::move(es);
  return s;
}

AlgorithmSpec AlgorithmSpec::n2fwl(HopLimit h) {
  AlgorithmSpec s;
  s.kind = Algorithm::N2FWL;
  s.k = 2;
  s.t = 2;
  s.hops = h;
  return s;
}

void AlgorithmSpec::validate() const {
  if (kind == Algorithm::OneWL) return;
  if (k < 2) throw std::invalid_argument("tuple algorithms need k >= 2");
  if (t < 1) throw std::invalid_argument("t must be >= 1");
  if (kind == Algorithm::N2FWL && !hops.is_infinite() && hops.hops() < 1) {
    throw std::invalid_argument("n2fwl needs h >= 1 or inf");
  }
  if (kind == Algorithm::KTFWLPlus) {
    if (es.arity() != t) throw std::invalid_argument("equivariant set arity must equal t");
    es.validate(k);
  }
  if (cap && *cap == 0) throw std::invalid_argument("iteration cap must be positive");
}

std::size_t AlgorithmSpec::effective_cap(std::size_t n) const {
  if (cap) return *cap;
  std::size_t power = 1;
  for (std::size_t i = 0; i < arity(); ++i) {
    if (n != 0 && power > std::numeric_limits<std::size_t>::max() / 4 / n) return std::numeric_limits<std::size_t>::max();
    power *= n;
  }
  return 2 * power + 2;
}

EquivariantSetSpec AlgorithmSpec::neighbor_set() const {
  switch (kind) {
    case Algorithm::KTFWL:
      return EquivariantSetSpec::global(t);
    case Algorithm::KTFWLPlus:
      return es;
    case Algorithm::N2FWL:
      return EquivariantSetSpec::n2(hops);
    default:
      throw std::logic_error("algorithm has no equivariant neighbor set");
  }
}

namespace {

class AlgParser {
 public:
  explicit AlgParser(std::string_view text) {
    for (char c : text) {
      if (!std::isspace(static_cast<unsigned char>(c))) text_.push_back(c);
    }
  }

  AlgorithmSpec parse() {
    AlgorithmSpec spec;
    if (accept("1wl")) {
      spec = AlgorithmSpec::one_wl();
    } else if (accept("kwl(")) {
      spec = AlgorithmSpec::kwl(integer());
      expect(")");
    } else if (accept("kfwl(")) {
      spec = AlgorithmSpec::kfwl(integer());
      expect(")");
    } else if (accept("ktfwl+(")) {
      const auto k = integer();
      expect(",");
      const auto t = integer();
      expect(",");
      // The ES text runs up to the parenthesis matching "ktfwl+(".
      const std::size_t start = pos_;
      int depth = 0;
      while (pos_ < text_.size() && !(depth == 0 && text_[pos_] == ')')) {
        if (text_[pos_] == '(') ++depth;
        if (text_[pos_] == ')') --depth;
        ++pos_;
      }
      auto es = parse_equivariant_set(std::string_view(text_).substr(start, pos_ - start));
      expect(")");
      spec = AlgorithmSpec::ktfwl_plus(k, t, std::move(es));
    } else if (accept("ktfwl(")) {
      const auto k = integer();
      expect(",");
      spec = AlgorithmSpec::ktfwl(k, integer());
      expect(")");
    } else if (accept("n2fwl(")) {
      accept("h=");
      spec = AlgorithmSpec::n2fwl(accept("inf") ? HopLimit::infinite() : HopLimit::finite(integer()));
      expect(")");
    } else {
      fail("unknown algorithm");
    }
    if (accept(";cap=")) spec.cap = integer();
    if (pos_ != text_.size()) fail("unexpected trailing text");
    spec.validate();
    return spec;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw std::invalid_argument("algorithm '" + text_ + "' at " + std::to_string(pos_) + ": " + why);
  }

  bool accept(std::string_view token) {
    if (std::string_view(text_).substr(pos_).starts_with(token)) {
      pos_ += token.size();
      return true;
    }
    return false;
  }

  void expect(std::string_view token) {
    if (!accept(token)) fail("expected '" + std::string(token) + "'");
  }

  std::uint32_t integer() {
    std::uint32_t value = 0;
    const char* first = text_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, text_.data() + text_.size(), value);
    if (ec != std::errc() || ptr == first) fail("expected an integer");
    pos_ += static_cast<std::size_t>(ptr - first);
    return value;
  }

  std::string text_;
  std::size_t pos_ = 0;
};

}  // namespace

AlgorithmSpec parse_algorithm(std::string_view text) { return AlgParser(text).parse(); }

std::string to_string(const AlgorithmSpec& spec) {
  const auto k = std::to_string(spec.k);
  const auto t = std::to_string(spec.t);
  std::string out;
  switch (spec.kind) {
    case Algorithm::OneWL:
      out = "1wl";
      break;
    case Algorithm::KWL:
      out = "kwl(" + k + ")";
      break;
    case Algorithm::KFWL:
      out = "kfwl(" + k + ")";
      break;
    case Algorithm::KTFWL:
      out = "ktfwl(" + k + "," + t + ")";
      break;
    case Algorithm::KTFWLPlus:
      out = "ktfwl+(" + k + "," + t + "," + to_string(spec.es) + ")";
      break;
    case Algorithm::N2FWL:
      out = "n2fwl(h=" + to_string(spec.hops) + ")";
      break;
  }
  if (spec.cap) out += ";cap=" + std::to_string(*spec.cap);
  return out;
}

}  // namespace wlkit
