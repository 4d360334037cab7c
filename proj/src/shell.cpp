#include "dormant/shell.hpp"

#include <algorithm>
#include <iomanip>
#include <map>
#include <sstream>

#include "dormant/cartier.hpp"
#include "dormant/enumerate.hpp"
#include "dormant/error.hpp"
#include "dormant/fp.hpp"
#include "dormant/miura.hpp"
#include "dormant/surface.hpp"
#include "dormant/tango.hpp"

namespace dormant {

namespace {

constexpr fp_t kMaxShellPrime = 97;
constexpr int kMaxShellRank = 4;

const std::pair<Command, const char*> kCommandNames[] = {
    {Command::Pcurv, "pcurv"},         {Command::Cartier, "cartier"},
    {Command::Pretango, "pretango"},   {Command::Enumerate, "enumerate"},
    {Command::TangoCertify, "tango-certify"}, {Command::TangoSearch, "tango-search"},
    {Command::Miura, "miura"},         {Command::Raynaud, "raynaud"},
    {Command::Selftest, "selftest"},
};

std::vector<std::string> words(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  std::string w;
  while (is >> w) out.push_back(w);
  return out;
}

std::string collapse(const std::string& s) {
  std::string out;
  for (const std::string& w : words(s)) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

std::string first_word(const std::string& s) {
  const auto w = words(s);
  return w.empty() ? std::string() : w[0];
}

bool is_curve_kind(const std::string& w) { return w == "p1" || w == "ell" || w == "raynaud"; }
bool is_block_kind(const std::string& w) {
  return w == "conn" || w == "form" || w == "function" || w == "gtc" || w == "surface";
}

[[noreturn]] void fail_at(ErrorCode code, int line, const std::string& what) {
  raise(code, "line " + std::to_string(line) + ": " + what);
}

// Re-raises library errors met while validating a line as SyntaxError or SemanticError.
template <class F>
auto at_line(int line, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::SyntaxError || e.code() == ErrorCode::SemanticError) fail_at(e.code(), line, e.detail());
    fail_at(ErrorCode::SemanticError, line, std::string(error_name(e.code())) + ": " + e.detail());
  } catch (const std::exception& e) {
    fail_at(ErrorCode::SyntaxError, line, e.what());
  }
}

std::pair<std::string, std::string> split_kv(const std::string& w, int line) {
  const auto eq = w.find('=');
  if (eq == std::string::npos || eq == 0) fail_at(ErrorCode::SyntaxError, line, "expected key=value, got '" + w + "'");
  return {w.substr(0, eq), w.substr(eq + 1)};
}

CurvePtr checked_curve(const std::string& text) {
  CurvePtr c = parse_curve(text);
  if (c->p() > kMaxShellPrime) raise(ErrorCode::SemanticError, "primes above 97 are not supported by the shell");
  return c;
}

struct ConnHeader {
  int rank = 0;
  std::string bundle;
};

ConnHeader conn_header(const Block& b, int line) {
  ConnHeader h;
  bool has_rank = false, has_bundle = false;
  for (const std::string& w : b.header) {
    auto [k, v] = split_kv(w, line);
    if (k == "rank" && !has_rank) {
      has_rank = true;
      if (v.empty() || v.size() > 2 || !std::all_of(v.begin(), v.end(), [](char c) { return c >= '0' && c <= '9'; }))
        fail_at(ErrorCode::SyntaxError, line, "bad rank '" + v + "'");
      h.rank = std::stoi(v);
      if (h.rank < 1 || h.rank > kMaxShellRank) fail_at(ErrorCode::SemanticError, line, "rank must lie in 1..4");
    } else if (k == "bundle" && !has_bundle) {
      has_bundle = true;
      h.bundle = v;
    } else {
      fail_at(ErrorCode::SyntaxError, line, "unexpected or repeated key '" + k + "'");
    }
  }
  if (!has_rank || !has_bundle) fail_at(ErrorCode::SyntaxError, line, "conn needs rank= and bundle=");
  return h;
}

bool has_special(const Block& b) { return !b.lines.empty() && b.lines.back() == "special=true"; }

Command infer_command(const JobSpec& s) {
  if (s.blocks.empty()) return s.curve ? Command::Enumerate : Command::Selftest;
  const Block& b = s.blocks.front();
  if (b.kind == "conn") return has_special(b) ? Command::Miura : Command::Pretango;
  if (b.kind == "form") return Command::Cartier;
  if (b.kind == "function") return Command::TangoCertify;
  return Command::Raynaud;
}

}  // namespace

const char* command_name(Command c) {
  for (const auto& [cmd, name] : kCommandNames)
    if (cmd == c) return name;
  return "?";
}

std::optional<std::string> JobSpec::arg(const std::string& key) const {
  for (const auto& [k, v] : args)
    if (k == key) return v;
  return std::nullopt;
}

Command JobSpec::effective_command() const { return command ? *command : infer_command(*this); }

std::string normalize_job_text(const std::string& text) {
  std::istringstream is(text);
  std::string line, out;
  while (std::getline(is, line)) {
    const std::string t = collapse(line);
    if (t.empty() || t[0] == '#') continue;
    out += t;
    out += '\n';
  }
  return out;
}

JobSpec parse_job(const std::string& text) {
  struct Line {
    int no;
    std::string text;
  };
  std::vector<Line> lines;
  {
    std::istringstream is(text);
    std::string raw;
    int no = 0;
    while (std::getline(is, raw)) {
      ++no;
      const std::string t = collapse(raw);
      if (!t.empty() && t[0] != '#') lines.push_back({no, t});
    }
  }
  if (lines.empty()) fail_at(ErrorCode::SyntaxError, 1, "empty job file");

  JobSpec spec;
  CurvePtr curve;
  std::optional<long long> p_value;
  std::size_t i = 0;
  const auto next_is_header = [&](const std::string& w) { return i < lines.size() && first_word(lines[i].text) == w; };

  if (next_is_header("job")) {
    const auto ws = words(lines[i].text);
    const int no = lines[i].no;
    if (ws.size() < 2) fail_at(ErrorCode::SyntaxError, no, "job line needs a command");
    bool found = false;
    for (const auto& [cmd, name] : kCommandNames)
      if (ws[1] == name) {
        spec.command = cmd;
        found = true;
      }
    if (!found) fail_at(ErrorCode::SyntaxError, no, "unknown command '" + ws[1] + "'");
    for (std::size_t k = 2; k < ws.size(); ++k) {
      auto kv = split_kv(ws[k], no);
      if (spec.arg(kv.first)) fail_at(ErrorCode::SemanticError, no, "repeated argument '" + kv.first + "'");
      spec.args.push_back(std::move(kv));
    }
    ++i;
  }
  if (next_is_header("mode")) {
    const auto ws = words(lines[i].text);
    if (ws.size() != 2 || (ws[1] != "human" && ws[1] != "machine"))
      fail_at(ErrorCode::SyntaxError, lines[i].no, "mode must be human or machine");
    spec.mode = ws[1];
    ++i;
  }
  if (i < lines.size() && lines[i].text.rfind("p=", 0) == 0) {
    const int no = lines[i].no;
    const std::string v = lines[i].text.substr(2);
    if (v.empty() || v.size() > 9 || !std::all_of(v.begin(), v.end(), [](char c) { return c >= '0' && c <= '9'; }))
      fail_at(ErrorCode::SyntaxError, no, "bad prime '" + v + "'");
    p_value = std::stoll(v);
    if (*p_value < 3 || *p_value > static_cast<long long>(kMaxShellPrime) || !is_prime(static_cast<std::uint64_t>(*p_value)))
      fail_at(ErrorCode::SemanticError, no, "p must be an odd prime at most 97");
    spec.p_line = lines[i].text;
    ++i;
  }
  if (i < lines.size() && is_curve_kind(first_word(lines[i].text))) {
    const int no = lines[i].no;
    curve = at_line(no, [&] { return checked_curve(lines[i].text); });
    if (p_value && static_cast<long long>(curve->p()) != *p_value)
      fail_at(ErrorCode::SemanticError, no, "curve prime differs from the p= line");
    spec.curve = lines[i].text;
    ++i;
  }

  while (i < lines.size()) {
    const int no = lines[i].no;
    auto ws = words(lines[i].text);
    const std::string kind = ws[0];
    if (!is_block_kind(kind)) {
      if (kind == "job" || kind == "mode" || is_curve_kind(kind) || kind.rfind("p=", 0) == 0)
        fail_at(ErrorCode::SyntaxError, no, "'" + kind + "' line out of order");
      fail_at(ErrorCode::SyntaxError, no, "unknown block '" + kind + "'");
    }
    Block b;
    b.kind = kind;
    b.header.assign(ws.begin() + 1, ws.end());
    ++i;
    const auto need_line = [&](const char* what) -> const Line& {
      if (i >= lines.size()) fail_at(ErrorCode::SyntaxError, lines.back().no, std::string("unexpected end of file in ") + what);
      return lines[i++];
    };
    if (kind == "conn") {
      const ConnHeader h = conn_header(b, no);
      if (!curve) fail_at(ErrorCode::SemanticError, no, "conn block needs a curve line");
      const BundleLabel label = at_line(no, [&] { return parse_bundle_label(*curve, h.bundle); });
      if (label.rank() != h.rank) fail_at(ErrorCode::SemanticError, no, "bundle rank differs from rank=");
      for (int e = 0; e < h.rank * h.rank; ++e) {
        const Line& l = need_line("conn block");
        if (is_block_kind(first_word(l.text)) || l.text == "special=true")
          fail_at(ErrorCode::SyntaxError, l.no, "conn block needs " + std::to_string(h.rank * h.rank) + " entries");
        at_line(l.no, [&] { return parse_ffelem(curve, l.text); });
        b.lines.push_back(l.text);
      }
      if (i < lines.size() && lines[i].text.rfind("special=", 0) == 0) {
        if (lines[i].text != "special=true") fail_at(ErrorCode::SyntaxError, lines[i].no, "special flag must read special=true");
        if (h.rank != 2) fail_at(ErrorCode::SemanticError, lines[i].no, "special=true needs a rank-2 block");
        b.lines.push_back(lines[i++].text);
      }
    } else if (kind == "form" || kind == "function") {
      if (!b.header.empty()) fail_at(ErrorCode::SyntaxError, no, kind + " takes no arguments");
      if (!curve) fail_at(ErrorCode::SemanticError, no, kind + " block needs a curve line");
      const Line& l = need_line(kind.c_str());
      at_line(l.no, [&] { return parse_ffelem(curve, l.text); });
      b.lines.push_back(l.text);
    } else {
      if (!b.header.empty()) fail_at(ErrorCode::SyntaxError, no, kind + " takes no arguments");
      for (;;) {
        const Line& l = need_line(kind.c_str());
        if (l.text == "end") break;
        b.lines.push_back(l.text);
      }
    }
    spec.blocks.push_back(std::move(b));
  }
  return spec;
}

std::string render_job(const JobSpec& spec) {
  std::ostringstream os;
  if (spec.command) {
    os << "job " << command_name(*spec.command);
    for (const auto& [k, v] : spec.args) os << ' ' << k << '=' << v;
    os << '\n';
  }
  if (spec.mode) os << "mode " << *spec.mode << '\n';
  if (spec.p_line) os << *spec.p_line << '\n';
  if (spec.curve) os << *spec.curve << '\n';
  for (const Block& b : spec.blocks) {
    os << b.kind;
    for (const std::string& w : b.header) os << ' ' << w;
    os << '\n';
    for (const std::string& l : b.lines) os << l << '\n';
    if (b.kind == "gtc" || b.kind == "surface") os << "end\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------

namespace {

bool is_input_error(ErrorCode c) {
  switch (c) {
    case ErrorCode::SyntaxError:
    case ErrorCode::SemanticError:
    case ErrorCode::InvalidArgument:
    case ErrorCode::NotPrime:
    case ErrorCode::ZeroDenominator:
    case ErrorCode::NotOnCurve:
    case ErrorCode::CurveMismatch:
    case ErrorCode::NotOmegaBundle:
    case ErrorCode::UndeclaredPoleDetected:
    case ErrorCode::UnsupportedCurve:
      return true;
    default:
      return false;
  }
}

const char* yes_no(bool b) { return b ? "yes" : "no"; }
const char* true_false(bool b) { return b ? "true" : "false"; }

// Aligned "key  value" rows in human mode, "key=value" in machine mode.
class Report {
 public:
  explicit Report(bool machine) : machine_(machine) {}
  void row(const std::string& k, const std::string& v) { rows_.emplace_back(k, v); }
  void text(const std::string& t) { rows_.emplace_back(std::string(), t); }
  std::string str() const {
    std::size_t w = 0;
    for (const auto& [k, v] : rows_) w = std::max(w, k.size());
    std::ostringstream os;
    for (const auto& [k, v] : rows_) {
      if (k.empty()) os << v << '\n';
      else if (machine_) os << k << '=' << v << '\n';
      else os << std::left << std::setw(static_cast<int>(w) + 2) << k << v << '\n';
    }
    return os.str();
  }

 private:
  bool machine_;
  std::vector<std::pair<std::string, std::string>> rows_;
};

struct Context {
  const JobSpec& spec;
  unsigned threads;
  CurvePtr curve;

  bool machine() const { return spec.machine(); }
  const Block& block(const char* kind) const {
    for (const Block& b : spec.blocks)
      if (b.kind == kind) return b;
    raise(ErrorCode::InvalidArgument, std::string("job needs a ") + kind + " block");
  }
  const CurvePtr& need_curve() const {
    if (!curve) raise(ErrorCode::InvalidArgument, "job needs a curve line");
    return curve;
  }
  std::string arg_or(const std::string& k, const std::string& dflt) const { return spec.arg(k).value_or(dflt); }
  long long int_arg(const std::string& k, long long dflt, long long lo, long long hi) const {
    const auto v = spec.arg(k);
    if (!v) return dflt;
    long long out = 0;
    try {
      std::size_t pos = 0;
      out = std::stoll(*v, &pos);
      if (pos != v->size()) throw std::invalid_argument(k);
    } catch (const std::exception&) {
      raise(ErrorCode::InvalidArgument, "bad integer for " + k);
    }
    if (out < lo || out > hi) raise(ErrorCode::InvalidArgument, k + " out of range");
    return out;
  }
  bool bool_arg(const std::string& k) const {
    const auto v = spec.arg(k);
    if (!v) return false;
    if (*v == "true") return true;
    if (*v == "false") return false;
    raise(ErrorCode::InvalidArgument, k + " must be true or false");
  }

  LogConnection connection() const {
    const Block& b = block("conn");
    const CurvePtr& c = need_curve();
    const ConnHeader h = conn_header(b, 0);
    FFMatrix a(c, h.rank);
    for (int e = 0; e < h.rank * h.rank; ++e) a(e / h.rank, e % h.rank) = parse_ffelem(c, b.lines[e]);
    BundleLabel label = has_special(b) ? miura_label(c) : parse_bundle_label(*c, h.bundle);
    if (has_special(b) && to_string(parse_bundle_label(*c, h.bundle)) != to_string(label))
      raise(ErrorCode::InvalidArgument, "special=true needs bundle=" + to_string(label));
    LogConnection conn(c, std::move(a), std::move(label));
    conn.validate();
    return conn;
  }
  FFElem single(const char* kind) const { return parse_ffelem(need_curve(), block(kind).lines.at(0)); }
};

std::string render_oper(const MiuraGL2Oper& m) {
  std::ostringstream os;
  os << m.curve()->descriptor() << '\n';
  os << "conn rank=2 bundle=" << to_string(m.conn.label()) << '\n';
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) os << m.conn.entry(i, j).to_string() << '\n';
  os << "special=true\n";
  return os.str();
}

std::string mark_name(const Curve& c, std::size_t k) {
  return k < c.marks().size() ? c.marks()[k].to_string() : std::to_string(k);
}

std::string join(const std::vector<fp_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

std::vector<fp_t> parse_monodromy(const std::string& text, fp_t p) {
  std::vector<fp_t> out;
  if (text.empty() || text == "-") return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    long long v = 0;
    try {
      std::size_t pos = 0;
      v = std::stoll(item, &pos);
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      raise(ErrorCode::InvalidArgument, "bad monodromy entry '" + item + "'");
    }
    out.push_back(fp_from_int(v, p));
  }
  if (text.back() == ',') raise(ErrorCode::InvalidArgument, "trailing comma in monodromy");
  return out;
}

JobResult run_pcurv(const Context& cx) {
  const LogConnection conn = cx.connection();
  const FFMatrix psi = p_curvature(conn);
  Report r(cx.machine());
  for (int i = 0; i < psi.n(); ++i)
    for (int j = 0; j < psi.n(); ++j)
      r.row("psi[" + std::to_string(i) + "][" + std::to_string(j) + "]", psi(i, j).to_string());
  r.row("zero", cx.machine() ? true_false(psi.is_zero()) : yes_no(psi.is_zero()));
  return {r.str(), 0};
}

JobResult run_cartier(const Context& cx) {
  const FFElem h = cx.single("form");
  const FFElem g = cartier(h);
  Report r(cx.machine());
  r.row("form", h.to_string() + " dx");
  r.row("cartier", g.to_string() + " dx");
  r.row("exact", cx.machine() ? true_false(g.is_zero()) : yes_no(g.is_zero()));
  r.row("fixed", cx.machine() ? true_false(g == h) : yes_no(g == h));
  return {r.str(), 0};
}

JobResult run_pretango(const Context& cx) {
  const PreTangoReport rep = is_pre_tango(cx.connection());
  Report r(cx.machine());
  if (cx.machine()) r.row("pretango", true_false(rep.pre_tango));
  else r.text(yes_no(rep.pre_tango));
  r.row("flat", cx.machine() ? true_false(rep.flat) : yes_no(rep.flat));
  if (rep.generator) r.row("generator", rep.generator->to_string());
  if (rep.cartier) r.row("cartier", rep.cartier->to_string() + " dx");
  return {r.str(), rep.pre_tango ? 0 : 1};
}

void enumeration_rows(Report& r, const EnumerationReport& e, bool list) {
  r.row("curve", e.curve_tag);
  r.row("monodromy", "(" + join(e.monodromy) + ")");
  r.row("flat", std::to_string(e.flat_count));
  r.row("pretango", e.pretango_checked ? std::to_string(e.pretango_count) : "-");
  r.row("admissible", yes_no(e.admissible));
  r.row("formula", to_string(e.formula_value));
  if (!list) return;
  for (const LogConnection& c : e.flat_list) {
    const bool pt = e.pretango_checked &&
                    std::find(e.pretango_list.begin(), e.pretango_list.end(), c) != e.pretango_list.end();
    r.row(pt ? "  pre-Tango a" : "  flat a", c.entry(0, 0).to_string());
  }
}

JobResult run_enumerate(const Context& cx) {
  const CurvePtr& c = cx.need_curve();
  const bool with_pt = cx.bool_arg("pretango");
  const std::string mono = cx.arg_or("monodromy", "");
  std::ostringstream os;
  if (mono == "all") {
    const auto reports = sweep(c, with_pt, cx.threads);
    for (const EnumerationReport& e : reports) {
      if (cx.machine()) {
        os << "mu=" << join(e.monodromy) << ' ' << machine_line(e) << '\n';
      } else {
        Report r(false);
        enumeration_rows(r, e, false);
        os << r.str() << '\n';
      }
    }
    return {os.str(), 0};
  }
  const FlatEnumerator en(c);
  const EnumerationReport e = en.enumerate(parse_monodromy(mono, c->p()), with_pt);
  if (cx.machine()) return {machine_line(e) + "\n", 0};
  Report r(false);
  enumeration_rows(r, e, true);
  return {r.str() + "\n" + machine_line(e) + "\n", 0};
}

std::string certificate_text(const TangoCertificate& cert, bool recheck) {
  std::ostringstream os;
  os << "certificate\n";
  os << "curve = " << cert.curve->descriptor() << '\n';
  os << "f = " << cert.f.to_string() << '\n';
  for (const auto& [label, coeff] : cert.df_divisor) os << "branch " << label << ' ' << coeff << '\n';
  os << "D = " << to_string(cert.floor_divisor) << '\n';
  os << "degree = " << cert.degree << '\n';
  os << "recheck = " << true_false(recheck) << '\n';
  return os.str();
}

JobResult run_tango_certify(const Context& cx) {
  const TangoCertificate cert = certify_tango_structure(cx.need_curve(), cx.single("function"));
  const bool ok = recheck_certificate(cert);
  return {certificate_text(cert, ok), ok ? 0 : 1};
}

JobResult run_tango_search(const Context& cx) {
  const int height = static_cast<int>(cx.int_arg("height", 2, 0, 12));
  const auto max = static_cast<std::size_t>(cx.int_arg("max", 8, 1, 1000));
  const auto found = tango_search(cx.need_curve(), height, max);
  std::ostringstream os;
  os << "found = " << found.size() << '\n';
  for (const TangoCertificate& c : found) os << "f = " << c.f.to_string() << "  D = " << to_string(c.floor_divisor) << '\n';
  return {os.str(), found.empty() ? 1 : 0};
}

JobResult run_miura(const Context& cx) {
  const Block& b = cx.block("conn");
  const std::string action = cx.arg_or("action", has_special(b) ? "dormant" : "from-pretango");
  if (action == "from-pretango") {
    const MiuraGL2Oper m = miura_from_tango(cx.connection());
    std::ostringstream os;
    const ExponentVector ev = exponent_of(m);
    for (std::size_t k = 0; k < ev.per_mark.size(); ++k)
      os << "# exponent " << mark_name(*m.curve(), k) << " (" << join(ev.per_mark[k]) << ")\n";
    os << "# dormant " << true_false(is_dormant(m)) << '\n';
    os << render_oper(m);
    return {os.str(), 0};
  }
  const LogConnection conn = cx.connection();
  check_special(conn);
  const MiuraGL2Oper m{conn};
  if (action == "exponent") {
    const ExponentVector ev = exponent_of(m);
    Report r(cx.machine());
    for (std::size_t k = 0; k < ev.per_mark.size(); ++k) {
      const std::string name = mark_name(*m.curve(), k);
      r.row("exponent " + name, "(" + join(ev.per_mark[k]) + ")");
      r.row("class " + name, "(" + join(ev.cls[k]) + ")");
    }
    if (ev.per_mark.empty()) r.text(cx.machine() ? "marks=0" : "no marks");
    return {r.str(), 0};
  }
  if (action == "dormant") {
    const bool d = is_dormant(m);
    Report r(cx.machine());
    if (cx.machine()) r.row("dormant", true_false(d));
    else r.text(yes_no(d));
    if (d) r.row("pretango", pretango_of(m).entry(0, 0).to_string());
    return {r.str(), d ? 0 : 1};
  }
  raise(ErrorCode::InvalidArgument, "miura action must be from-pretango, exponent or dormant");
}

std::string block_text(const Block& b) {
  std::string s;
  for (const std::string& l : b.lines) s += l + "\n";
  return s;
}

JobResult run_raynaud(const Context& cx) {
  const bool has_gtc = std::any_of(cx.spec.blocks.begin(), cx.spec.blocks.end(), [](const Block& b) { return b.kind == "gtc"; });
  const std::string action = cx.arg_or("action", has_gtc ? "build" : "validate");
  if (action == "build") {
    const GeneralizedTangoCurve g = parse_generalized_tango(block_text(cx.block("gtc")));
    const SurfaceGluingData data = build_surface(g, default_cover(g));
    const CocycleReport rep = validate_cocycle(data);
    std::ostringstream os;
    os << render_surface(data);
    os << "# cocycle " << (rep.ok ? "ok" : "failed") << '\n';
    return {os.str(), rep.ok ? 0 : 1};
  }
  if (action != "validate") raise(ErrorCode::InvalidArgument, "raynaud action must be build or validate");
  const SurfaceGluingData data = parse_surface("surface\n" + block_text(cx.block("surface")));
  const CocycleReport rep = validate_cocycle(data);
  const auto samples = static_cast<std::size_t>(cx.int_arg("samples", 100, 0, 100000));
  const auto seed = static_cast<std::uint64_t>(cx.int_arg("seed", 1, 0, 1LL << 62));
  const FiberProbeReport probe = fiber_smoothness_probe(data, samples, seed);
  GeneralizedTangoCurve g;
  g.curve = data.curve;
  g.n_divisor = data.n_divisor;
  const PathologyWitness w = pathology_witness(g, static_cast<int>(cx.int_arg("height", 6, 1, 12)));

  Report r(cx.machine());
  r.row("cocycle", rep.ok ? "ok" : "failed");
  for (const std::string& v : rep.violations) r.row("violation", v);
  r.row("fiber_points", std::to_string(probe.distinct_points));
  r.row("singular_points", std::to_string(probe.singular_points));
  r.row("samples", std::to_string(probe.samples.size()));
  r.row("singular_samples", std::to_string(probe.singular_samples));
  r.row("h0_N", w.exact ? std::to_string(w.dim_lower)
                        : "[" + std::to_string(w.dim_lower) + "," + std::to_string(w.dim_upper) + "]");
  r.row("h0_N_positive", cx.machine() ? true_false(w.conclusion) : yes_no(w.conclusion));
  const bool valid = rep.ok && probe.singular_points == 0;
  r.row("valid", cx.machine() ? true_false(valid) : yes_no(valid));
  return {r.str(), valid ? 0 : 1};
}

JobResult run_selftest(const Context& cx) {
  const auto checks = selftest_checks(cx.threads);
  std::ostringstream os;
  std::size_t passed = 0;
  for (const auto& [name, ok] : checks) {
    os << (ok ? "pass " : "FAIL ") << name << '\n';
    passed += ok ? 1 : 0;
  }
  os << "selftest: " << passed << " passed, " << checks.size() - passed << " failed\n";
  return {os.str(), passed == checks.size() ? 0 : 1};
}

}  // namespace

JobResult run_job(const JobSpec& spec, unsigned threads) {
  try {
    Context cx{spec, std::max(1u, threads), nullptr};
    if (spec.curve) cx.curve = checked_curve(*spec.curve);
    switch (spec.effective_command()) {
      case Command::Pcurv: return run_pcurv(cx);
      case Command::Cartier: return run_cartier(cx);
      case Command::Pretango: return run_pretango(cx);
      case Command::Enumerate: return run_enumerate(cx);
      case Command::TangoCertify: return run_tango_certify(cx);
      case Command::TangoSearch: return run_tango_search(cx);
      case Command::Miura: return run_miura(cx);
      case Command::Raynaud: return run_raynaud(cx);
      case Command::Selftest: return run_selftest(cx);
    }
    return {"error: unknown command\n", 2};
  } catch (const Error& e) {
    return {std::string("error: ") + error_name(e.code()) + ": " + e.detail() + "\n", is_input_error(e.code()) ? 2 : 1};
  } catch (const std::exception& e) {
    return {std::string("error: ") + e.what() + "\n", 1};
  }
}

JobResult run_job_text(const std::string& text, unsigned threads) {
  JobSpec spec;
  try {
    spec = parse_job(text);
  } catch (const Error& e) {
    return {std::string("error: ") + error_name(e.code()) + ": " + e.detail() + "\n", 2};
  }
  return run_job(spec, threads);
}

// ---------------------------------------------------------------------------

std::vector<std::pair<std::string, bool>> selftest_checks(unsigned threads) {
  std::vector<std::pair<std::string, bool>> out;
  const auto check = [&](const std::string& name, auto&& body) {
    bool ok = false;
    try {
      ok = body();
    } catch (const std::exception&) {
      ok = false;
    }
    out.emplace_back(name, ok);
  };

  check("elliptic pre-Tango count over F_5", [] {
    const auto e = count_pretango(Curve::weierstrass(5, 3, 0), {});
    return e.flat_count == 5 && e.pretango_count == 4;
  });
  check("genus-0 flat degree law for p=3, r=3", [&] {
    for (const auto& e : sweep(Curve::p1(3, {Mark::at(0), Mark::at(1), Mark::infinity()}), false, threads))
      if (e.flat_count != (e.admissible ? 1 : 0)) return false;
    return true;
  });
  check("emptiness law for p=5, r=3", [&] {
    for (const auto& e : sweep(Curve::p1(5, {Mark::at(0), Mark::at(1), Mark::infinity()}), true, threads))
      if (e.formula_value < 0 && e.pretango_count != 0) return false;
    return true;
  });
  check("closed-form and powered p-curvature agree", [] {
    const CurvePtr c = Curve::weierstrass(7, 0, 5);
    const FFElem a = c->x() * c->y().inverse() + c->constant(3);
    FFMatrix m(c, 1);
    m(0, 0) = a;
    return p_curvature_operator_power(m)(0, 0) == p_curvature_rank1(a);
  });
  check("Cartier kills exact forms and is semilinear", [] {
    const CurvePtr c = Curve::weierstrass(5, 3, 0);
    const FFElem f = c->x().pow(2) * c->y() + c->x().inverse();
    const FFElem w = c->y().inverse() + c->x();
    const FFElem g = c->x() + c->constant(2);
    return cartier(f.derivative()).is_zero() && cartier(g.pow(5) * w) == g * cartier(w);
  });
  check("Raynaud (5,1) Tango certificate", [] {
    const CurvePtr c = Curve::raynaud(5, 1);
    const TangoCertificate cert = certify_tango_structure(c, c->y().inverse());
    return cert.degree == 2 && recheck_certificate(cert);
  });
  check("pre-Tango to dormant oper round trip", [] {
    const CurvePtr c = Curve::weierstrass(5, 3, 0);
    const LogConnection conn = LogConnection::rank_one(c, c->y().inverse(), LineLabel::omega_log());
    if (!is_pre_tango(conn).pre_tango) return false;
    const MiuraGL2Oper m = miura_from_tango(conn);
    return is_dormant(m) && pretango_of(m) == conn;
  });
  check("trivial connection on an ordinary elliptic curve is not dormant", [] {
    const CurvePtr c = Curve::weierstrass(5, 3, 0);
    const LogConnection d = LogConnection::rank_one(c, c->zero(), LineLabel::omega_log());
    return !is_dormant(miura_from_cartan(cartan_from_connections({d})));
  });
  check("Raynaud (3,2) surface cocycle", [] {
    const CurvePtr c = Curve::raynaud(3, 2);
    const auto g = build_generalized_tango(certify_tango_structure(c, c->y().inverse()), Divisor{{"[0:0:1]", 3}}, 1, c->one());
    return validate_cocycle(build_surface(g, default_cover(g))).ok;
  });
  check("job parser round trip", [] {
    const std::string text = "job enumerate pretango=true\nmode machine\np=5\nell p=5 a=3 b=0\n";
    return render_job(parse_job(text)) == normalize_job_text(text);
  });
  return out;
}

}  // namespace dormant
