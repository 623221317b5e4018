#include "bstri/word.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "bstri/error.hpp"

namespace bstri {

namespace {

// Appends s to a reduced syllable stack, cancelling against the top.
void push_reduced(std::vector<Syllable>& out, const Syllable& s) {
  if (s.exp == 0) return;
  if (!out.empty() && out.back().gen == s.gen) {
    out.back().exp += s.exp;
    if (out.back().exp == 0) out.pop_back();
    return;
  }
  out.push_back(s);
}

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Word::Word(std::vector<Syllable> syllables) : syllables_(std::move(syllables)) {}

Word Word::generator(GenId g, const BigInt& exp) {
  Word w;
  if (exp != 0) w.syllables_.push_back({g, exp});
  return w;
}

BigInt Word::letter_length() const {
  BigInt n = 0;
  for (const auto& s : syllables_) n += abs(s.exp);
  return n;
}

Word Word::inverse() const {
  std::vector<Syllable> out;
  out.reserve(syllables_.size());
  for (auto it = syllables_.rbegin(); it != syllables_.rend(); ++it) {
    out.push_back({it->gen, -it->exp});
  }
  return Word(std::move(out));
}

Word Word::operator*(const Word& rhs) const {
  Word out = *this;
  out *= rhs;
  return out;
}

Word& Word::operator*=(const Word& rhs) {
  *this = free_reduce(*this);
  for (const auto& s : free_reduce(rhs).syllables_) push_reduced(syllables_, s);
  return *this;
}

Word Word::pow(std::int64_t n) const {
  const Word base = n < 0 ? inverse() : *this;
  Word out;
  for (std::int64_t i = 0; i < (n < 0 ? -n : n); ++i) out *= base;
  return out;
}

Word Word::concat(const Word& rhs) const {
  std::vector<Syllable> out = syllables_;
  out.insert(out.end(), rhs.syllables_.begin(), rhs.syllables_.end());
  return Word(std::move(out));
}

std::vector<BigInt> Word::exponent_sums(std::size_t ngens) const {
  std::vector<BigInt> sums(ngens, BigInt(0));
  for (const auto& s : syllables_) {
    if (s.gen >= ngens) {
      throw Error(ErrorKind::UndeclaredGenerator, "exponent_sums: generator index out of range");
    }
    sums[s.gen] += s.exp;
  }
  return sums;
}

Word free_reduce(const Word& w) {
  std::vector<Syllable> out;
  out.reserve(w.syllables().size());
  for (const auto& s : w.syllables()) push_reduced(out, s);
  return Word(std::move(out));
}

Word cyclic_reduce(const Word& w) {
  std::vector<Syllable> s = free_reduce(w).syllables();
  std::size_t first = 0;
  while (s.size() - first >= 2 && s[first].gen == s.back().gen) {
    s[first].exp += s.back().exp;
    s.pop_back();
    if (s[first].exp == 0) ++first;
  }
  return free_reduce(Word({s.begin() + static_cast<std::ptrdiff_t>(first), s.end()}));
}

Word conjugation_relator(GenId u, const BigInt& p, GenId v, const BigInt& q) {
  if (p == 0 || q == 0) {
    throw Error(ErrorKind::PreconditionViolated, "conjugation_relator: exponents must be nonzero");
  }
  // u == v would collapse syllables; keep the reduced form in that case too.
  return free_reduce(Word({{v, -1}, {u, p}, {v, 1}, {u, -q}}));
}

Word commutator(const Word& u, const Word& v) {
  return u.inverse() * v.inverse() * u * v;
}

Word substitute(const Word& w, const GeneratorAssignment& images) {
  Word out;
  for (const auto& s : w.syllables()) {
    auto it = images.find(s.gen);
    if (it == images.end()) {
      throw Error(ErrorKind::UnmappedGenerator,
                  "substitute: generator #" + std::to_string(s.gen) + " has no image");
    }
    const Word& image = it->second;
    if (image.syllable_count() == 1) {
      // Power of a single syllable: scale the exponent instead of repeating.
      const Syllable& only = image.syllables().front();
      out *= Word::generator(only.gen, only.exp * s.exp);
      continue;
    }
    const Word base = s.exp < 0 ? image.inverse() : image;
    const std::uint64_t times = to_u64(abs(s.exp));
    for (std::uint64_t i = 0; i < times; ++i) out *= base;
  }
  return out;
}

Alphabet::Alphabet(std::vector<std::string> names) : names_(std::move(names)) {
  std::set<std::string> seen;
  for (const auto& n : names_) {
    if (n.empty() || !is_ident_start(n.front()) ||
        !std::all_of(n.begin(), n.end(), is_ident_char)) {
      throw Error(ErrorKind::Parse, "invalid generator name '" + n + "'");
    }
    if (!seen.insert(n).second) {
      throw Error(ErrorKind::Parse, "duplicate generator name '" + n + "'");
    }
  }
}

GenId Alphabet::id(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) {
    throw Error(ErrorKind::UndeclaredGenerator, "undeclared generator '" + std::string(name) + "'");
  }
  return static_cast<GenId>(it - names_.begin());
}

bool Alphabet::contains(std::string_view name) const {
  return std::find(names_.begin(), names_.end(), name) != names_.end();
}

Word parse_word(std::string_view text, const Alphabet& alphabet) {
  std::vector<Syllable> out;
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skip_ws();
  if (trim(text) == "1") return Word();
  while (i < text.size()) {
    if (!is_ident_start(text[i])) {
      throw ParseError(std::string("unexpected character '") + text[i] + "'", i);
    }
    const std::size_t start = i;
    while (i < text.size() && is_ident_char(text[i])) ++i;
    const std::string name(text.substr(start, i - start));
    if (!alphabet.contains(name)) {
      throw ParseError("undeclared generator '" + name + "'", start);
    }
    BigInt exp = 1;
    if (i < text.size() && text[i] == '^') {
      ++i;
      const std::size_t num_start = i;
      if (i < text.size() && (text[i] == '-' || text[i] == '+')) ++i;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      std::string digits(text.substr(num_start, i - num_start));
      if (digits.empty() || digits == "-" || digits == "+") {
        throw ParseError("missing exponent after '^'", num_start);
      }
      exp = parse_bigint(digits);
      if (exp == 0) throw ParseError("zero exponent", num_start);
    }
    out.push_back({alphabet.id(name), exp});
    skip_ws();
  }
  return Word(std::move(out));
}

std::string format_word(const Word& w, const Alphabet& alphabet) {
  if (w.empty()) return "1";
  std::string out;
  for (const auto& s : w.syllables()) {
    if (!out.empty()) out += ' ';
    out += alphabet.name(s.gen);
    if (s.exp != 1) out += "^" + s.exp.get_str();
  }
  return out;
}

Presentation parse_presentation(std::string_view text) {
  Presentation pres;
  bool have_gens = false;
  std::size_t offset = 0;
  while (offset <= text.size()) {
    std::size_t eol = text.find('\n', offset);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(offset, eol - offset);
    const std::size_t line_start = offset;
    offset = eol + 1;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::string_view body = trim(line);
    if (body.empty()) continue;
    const std::size_t body_start = line_start + static_cast<std::size_t>(body.data() - line.data());
    if (!have_gens) {
      if (body.substr(0, 5) != "gens:") {
        throw ParseError("expected 'gens:' header", body_start);
      }
      std::istringstream names{std::string(body.substr(5))};
      std::vector<std::string> gens;
      for (std::string n; names >> n;) gens.push_back(n);
      if (gens.empty()) throw ParseError("no generators declared", body_start);
      pres.alphabet = Alphabet(std::move(gens));
      have_gens = true;
      continue;
    }
    auto parse_at = [&](std::string_view part, std::size_t part_offset) {
      try {
        return parse_word(part, pres.alphabet);
      } catch (const ParseError& e) {
        std::string msg = e.what();
        msg = msg.substr(0, msg.rfind(" at position"));
        throw ParseError(msg, body_start + part_offset + e.position());
      }
    };
    if (auto eq = body.find('='); eq != std::string_view::npos) {
      Word lhs = parse_at(body.substr(0, eq), 0);
      Word rhs = parse_at(body.substr(eq + 1), eq + 1);
      pres.relators.push_back(free_reduce(lhs * rhs.inverse()));
    } else {
      pres.relators.push_back(free_reduce(parse_at(body, 0)));
    }
  }
  if (!have_gens) throw ParseError("expected 'gens:' header", 0);
  return pres;
}

std::string format_presentation(const Presentation& pres) {
  std::string out = "gens:";
  for (const auto& n : pres.alphabet.names()) out += " " + n;
  out += '\n';
  for (const auto& r : pres.relators) out += format_word(r, pres.alphabet) + '\n';
  return out;
}

}  // namespace bstri
