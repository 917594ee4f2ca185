#include "tokcol/trace_io.hpp"

#include <cassert>
#include <sstream>

#include "tokcol/errors.hpp"

namespace tokcol {

namespace {

const char* tag_str(EleTag t) {
  switch (t) {
    case EleTag::Value: return "V";
    case EleTag::More: return "M";
    case EleTag::Done: return "D";
  }
  return "?";
}

EleTag tag_parse(const std::string& s) {
  if (s == "V") return EleTag::Value;
  if (s == "M") return EleTag::More;
  if (s == "D") return EleTag::Done;
  throw ParseError("bad ele tag '" + s + "'");
}

std::string res_str(const std::optional<Verdict>& r) {
  if (!r) return "-";
  return *r == Verdict::AllDistinct ? "D" : "C";
}

std::optional<Verdict> res_parse(const std::string& s) {
  if (s == "-") return std::nullopt;
  if (s == "D") return Verdict::AllDistinct;
  if (s == "C") return Verdict::Collision;
  throw ParseError("bad res '" + s + "'");
}

void emit_node(std::ostringstream& os, const NodeSnapshot& ns) {
  os << "rid=" << (ns.rid.is_sentinel() ? "T" : ns.rid.token().to_hex());
  os << " p=";
  if (ns.parent) os << *ns.parent; else os << "-";
  os << " chi=";
  if (ns.chi.empty()) os << "-";
  for (std::size_t i = 0; i < ns.chi.size(); ++i) os << (i ? "," : "") << ns.chi[i];
  os << " f=" << (ns.f ? 1 : 0) << " build=" << (ns.build ? 1 : 0);
  os << " cnt=";
  if (ns.cnt) os << *ns.cnt; else os << "-";
  os << " ele=" << tag_str(ns.ele_tag);
  os << " x=";
  if (ns.x.empty()) os << "-";
  for (std::size_t i = 0; i < ns.x.size(); ++i) os << (i ? "," : "") << ns.x[i].to_hex();
  os << " res=" << res_str(ns.res) << " sent=" << ns.sent << " phase=" << ns.phase;
  assert(ns.state_line.find(" | ") == std::string::npos);
  os << " | " << ns.state_line;
}

// Strict line-oriented reader: every header line has a fixed key.
struct Reader {
  std::istringstream in;
  int lineno = 0;

  explicit Reader(const std::string& text) : in(text) {}

  std::string line() {
    std::string s;
    if (!std::getline(in, s)) throw ParseError("trace truncated at line " + std::to_string(lineno));
    ++lineno;
    return s;
  }

  std::string field(const std::string& key) {
    std::string s = line();
    if (s.size() < key.size() + 1 || s.compare(0, key.size(), key) != 0 || s[key.size()] != ' ')
      throw ParseError("expected '" + key + " ...' at line " + std::to_string(lineno));
    return s.substr(key.size() + 1);
  }

  long long num(const std::string& key) {
    std::string v = field(key);
    try {
      std::size_t used = 0;
      long long r = std::stoll(v, &used);
      if (used != v.size()) throw std::invalid_argument(v);
      return r;
    } catch (const std::exception&) {
      throw ParseError("bad number for '" + key + "' at line " + std::to_string(lineno));
    }
  }
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t a = 0;
  while (a <= s.size()) {
    std::size_t b = s.find(sep, a);
    if (b == std::string::npos) b = s.size();
    out.push_back(s.substr(a, b - a));
    a = b + 1;
  }
  return out;
}

std::string kv(const std::vector<std::string>& parts, std::size_t idx, const std::string& key) {
  if (idx >= parts.size() || parts[idx].compare(0, key.size() + 1, key + "=") != 0)
    throw ParseError("expected '" + key + "=' in node line");
  return parts[idx].substr(key.size() + 1);
}

long long num_str(const std::string& v) {
  std::size_t used = 0;
  long long r = std::stoll(v, &used);
  if (used != v.size()) throw std::invalid_argument(v);
  return r;
}

NodeSnapshot parse_node(const std::string& body, int L, int rid_bits) {
  NodeSnapshot ns;
  std::size_t bar = body.find(" | ");
  if (bar == std::string::npos) throw ParseError("node line missing state separator");
  ns.state_line = body.substr(bar + 3);
  std::vector<std::string> parts = split(body.substr(0, bar), ' ');
  try {
    std::string rid = kv(parts, 0, "rid");
    if (rid != "T") ns.rid = Ident(BitString::from_hex(rid, rid_bits));
    std::string p = kv(parts, 1, "p");
    if (p != "-") ns.parent = static_cast<int>(num_str(p));
    std::string chi = kv(parts, 2, "chi");
    if (chi != "-")
      for (const std::string& c : split(chi, ','))
        ns.chi.push_back(static_cast<int>(num_str(c)));
    ns.f = num_str(kv(parts, 3, "f")) != 0;
    ns.build = num_str(kv(parts, 4, "build")) != 0;
    std::string cnt = kv(parts, 5, "cnt");
    if (cnt != "-") ns.cnt = num_str(cnt);
    ns.ele_tag = tag_parse(kv(parts, 6, "ele"));
    std::string x = kv(parts, 7, "x");
    if (x != "-")
      for (const std::string& h : split(x, ','))
        ns.x.push_back(BitString::from_hex(h, L));
    ns.res = res_parse(kv(parts, 8, "res"));
    ns.sent = static_cast<int>(num_str(kv(parts, 9, "sent")));
    ns.phase = static_cast<int>(num_str(kv(parts, 10, "phase")));
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(std::string("bad node line: ") + e.what());
  }
  return ns;
}

}  // namespace

std::string emit_trace(const RunTrace& t) {
  std::ostringstream os;
  os << "tokcol-trace 1\n";
  os << "algorithm " << to_string(t.algorithm) << "\n";
  os << "knowledge " << to_string(t.knowledge) << "\n";
  os << "n " << t.n << "\nk " << t.k << "\nL " << t.L << "\nB " << t.B << "\n";
  os << "M " << t.M << "\nP " << t.P << "\nid_bits " << t.id_bits << "\n";
  os << "packing " << (t.packing ? 1 : 0) << "\npack_cap " << t.pack_cap << "\n";
  os << "outcome " << to_string(t.outcome) << "\n";
  os << "halt";
  for (long long h : t.halt_round) os << ' ' << h;
  os << "\nrounds " << t.rounds.size() << "\n";
  for (std::size_t s = 0; s < t.rounds.size(); ++s) {
    os << "round " << s << "\n";
    assert(static_cast<int>(t.rounds[s].size()) == t.n);
    for (int v = 0; v < t.n; ++v) {
      os << v << ": ";
      emit_node(os, t.rounds[s][v]);
      os << "\n";
    }
  }
  os << "end\n";
  return os.str();
}

RunTrace parse_trace(const std::string& text) {
  Reader rd(text);
  if (rd.line() != "tokcol-trace 1") throw ParseError("not a tokcol-trace 1 file");
  RunTrace t;
  t.level = TraceLevel::Full;

  auto alg = algorithm_from_string(rd.field("algorithm"));
  if (!alg) throw ParseError("unknown algorithm");
  t.algorithm = *alg;
  auto kn = knowledge_from_string(rd.field("knowledge"));
  if (!kn) throw ParseError("unknown knowledge mode");
  t.knowledge = *kn;

  t.n = static_cast<int>(rd.num("n"));
  t.k = static_cast<int>(rd.num("k"));
  t.L = static_cast<int>(rd.num("L"));
  t.B = static_cast<int>(rd.num("B"));
  t.M = static_cast<int>(rd.num("M"));
  t.P = static_cast<int>(rd.num("P"));
  t.id_bits = static_cast<int>(rd.num("id_bits"));
  t.packing = rd.num("packing") != 0;
  t.pack_cap = static_cast<int>(rd.num("pack_cap"));
  auto oc = outcome_from_string(rd.field("outcome"));
  if (!oc) throw ParseError("unknown outcome");
  t.outcome = *oc;
  if (t.n < 1 || t.L < 1) throw ParseError("bad trace dimensions");

  std::string halt = rd.field("halt");
  try {
    for (const std::string& h : split(halt, ' ')) {
      if (h.empty()) continue;
      t.halt_round.push_back(num_str(h));
    }
  } catch (const std::exception&) {
    throw ParseError("bad halt line");
  }
  if (static_cast<int>(t.halt_round.size()) != t.n)
    throw ParseError("halt line does not cover every node");

  long long rounds = rd.num("rounds");
  int rid_bits = t.algorithm == Algorithm::Rand ? t.id_bits : t.L;
  for (long long s = 0; s < rounds; ++s) {
    if (rd.field("round") != std::to_string(s))
      throw ParseError("round blocks out of order");
    std::vector<NodeSnapshot> row;
    row.reserve(t.n);
    for (int v = 0; v < t.n; ++v) {
      std::string ln = rd.line();
      std::string head = std::to_string(v) + ": ";
      if (ln.compare(0, head.size(), head) != 0)
        throw ParseError("expected node " + std::to_string(v) + " at line " +
                         std::to_string(rd.lineno));
      row.push_back(parse_node(ln.substr(head.size()), t.L, rid_bits));
    }
    t.rounds.push_back(std::move(row));
  }
  if (rd.line() != "end") throw ParseError("missing end marker");
  return t;
}

}  // namespace tokcol
