#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

#include "dormant/error.hpp"
#include "dormant/shell.hpp"
#include "fuzz.hpp"
#include "oracles.hpp"

using namespace dormant;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::InvalidArgument;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string golden(const std::string& name) { return slurp(std::string(DORMANT_SOURCE_DIR) + "/tests/golden/" + name); }

const char* const kMinimal =
    "p=5\n"
    "ell p=5 a=1 b=1\n"
    "conn rank=1 bundle=O\n"
    "0 / 1 | 0 / 1\n";

const char* const kPretangoYes =
    "# the 1/y pre-Tango structure on an ordinary curve\n"
    "job   pretango\n"
    "mode machine\n"
    "p=5\n"
    "ell  p=5 a=3 b=0\n"
    "\n"
    "conn rank=1 bundle=Omega_log\n"
    "  0 / 1 | 1 / 0 3 0 1\n";

// Value of key in a "k=v k=v" line.
std::string field(const std::string& line, const std::string& key) {
  std::istringstream is(line);
  std::string w;
  while (is >> w)
    if (w.rfind(key + "=", 0) == 0) return w.substr(key.size() + 1);
  FAIL("no field " << key << " in " << line);
  return {};
}

std::vector<fp_t> parse_mu(const std::string& s) {
  std::vector<fp_t> mu;
  std::istringstream is(s);
  std::string part;
  while (std::getline(is, part, ',')) mu.push_back(static_cast<fp_t>(std::stoul(part)));
  return mu;
}

oracle::Q parse_q(const std::string& s) {
  const auto slash = s.find('/');
  if (slash == std::string::npos) return oracle::Q(std::stoll(s));
  return oracle::Q(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
}

}  // namespace

TEST_CASE("parse_job examples") {
  const JobSpec spec = parse_job(kMinimal);
  CHECK_FALSE(spec.command.has_value());
  CHECK(spec.effective_command() == Command::Pretango);
  CHECK(spec.p_line == std::optional<std::string>("p=5"));
  CHECK(spec.curve == std::optional<std::string>("ell p=5 a=1 b=1"));
  REQUIRE(spec.blocks.size() == 1);
  CHECK(spec.blocks[0].kind == "conn");
  CHECK(spec.blocks[0].lines.size() == 1);

  CHECK(code_of([] { parse_job(""); }) == ErrorCode::SyntaxError);
  CHECK(code_of([] { parse_job("# only a comment\n\n"); }) == ErrorCode::SyntaxError);
  CHECK(code_of([] { parse_job("p1 p=5 marks=0,0,inf\n"); }) == ErrorCode::SemanticError);
  CHECK(code_of([] { parse_job("p=6\n"); }) == ErrorCode::SemanticError);
  CHECK(code_of([] { parse_job("p=5\nell p=7 a=0 b=5\n"); }) == ErrorCode::SemanticError);
  CHECK(code_of([] { parse_job("p=5\nell p=5 a=1 b=1\nconn rank=2 bundle=O\n0 / 1 | 0 / 1\n"); }) ==
        ErrorCode::SemanticError);
  CHECK(code_of([] { parse_job("p=5\nell p=5 a=1 b=1\nconn rank=2 bundle=O+T_log\n0 / 1 | 0 / 1\n"); }) ==
        ErrorCode::SyntaxError);
  CHECK(code_of([] { parse_job("job frobnicate\n"); }) == ErrorCode::SyntaxError);
  try {
    parse_job("p=5\n\nell p=5 a=1 b=1\nconn rank=1 bundle=O\n0 / 1 | 0 /\n");
    FAIL("accepted a truncated entry");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("line 5") != std::string::npos);
  }
}

TEST_CASE("command inference") {
  CHECK(parse_job("p=5\n").effective_command() == Command::Selftest);
  CHECK(parse_job("ell p=5 a=3 b=0\n").effective_command() == Command::Enumerate);
  CHECK(parse_job("ell p=5 a=3 b=0\nform\n1 / 1 | 0 / 1\n").effective_command() == Command::Cartier);
  CHECK(parse_job("raynaud p=5 l=1\nfunction\n1 / 1 | 0 / 1\n").effective_command() == Command::TangoCertify);
  CHECK(parse_job(slurp(std::string(DORMANT_SOURCE_DIR) + "/data/raynaud_p3_l2.gtc").insert(0, "gtc\n") + "end\n")
            .effective_command() == Command::Raynaud);
}

TEST_CASE("render inverts parse up to normalization") {
  for (const std::string text :
       {std::string(kMinimal), std::string(kPretangoYes),
        std::string("job enumerate   monodromy=0,1,4 pretango=true\n\nmode human\np1 p=5 marks=0,1,inf\n"),
        std::string("job raynaud action=validate samples=100\n# build first\nsurface\ncurve = raynaud p=3 l=2\nend\n")}) {
    CAPTURE(text);
    CHECK(render_job(parse_job(text)) == normalize_job_text(text));
    CHECK(render_job(parse_job(render_job(parse_job(text)))) == render_job(parse_job(text)));
  }
}

TEST_CASE("parser fuzz yields only structured errors") {
  std::mt19937_64 rng(9);
  const std::vector<std::string> seeds = {kMinimal, kPretangoYes,
                                          "job miura action=exponent\np1 p=5 marks=0,1,inf\nconn rank=2 bundle=O+T_log\n"
                                          "0 / 1\n0 / 1\n1 / 1\n0 / 1\nspecial=true\n"};
  int parsed = 0, rejected = 0, other = 0;
  for (int i = 0; i < 10000; ++i) {
    std::string input;
    switch (i % 3) {
      case 0: input = fuzz::random_bytes(rng); break;
      case 1: input = fuzz::random_tokens(rng); break;
      default: input = fuzz::mutate(rng, seeds[rng() % seeds.size()]); break;
    }
    try {
      const JobSpec spec = parse_job(input);
      ++parsed;
      // Whatever parses must render to something that parses to the same thing.
      CHECK(render_job(parse_job(render_job(spec))) == render_job(spec));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::SyntaxError || e.code() == ErrorCode::SemanticError) {
        ++rejected;
      } else {
        ++other;
        CAPTURE(input);
        FAIL_CHECK("unstructured error " << e.what());
      }
    } catch (const std::exception& e) {
      ++other;
      CAPTURE(input);
      FAIL_CHECK("foreign exception " << e.what());
    }
  }
  CHECK(other == 0);
  CHECK(parsed + rejected == 10000);
  CHECK(parsed > 0);
}

TEST_CASE("exit codes") {
  CHECK(run_job_text(kPretangoYes, 1).exit_code == 0);
  CHECK(run_job_text(kPretangoYes, 1).output.find("pretango=true") != std::string::npos);
  // The trivial connection on Omega_log is flat but not pre-Tango.
  const JobResult no = run_job_text("mode machine\nell p=5 a=3 b=0\nconn rank=1 bundle=Omega_log\n0 / 1 | 0 / 1\n", 1);
  CHECK(no.exit_code == 1);
  CHECK(no.output.find("pretango=false") != std::string::npos);
  CHECK(run_job_text("", 1).exit_code == 2);
  CHECK(run_job_text(kMinimal, 1).exit_code == 2);  // O is not Omega_log
  CHECK(run_job_text("p=5\nell p=5 a=1 b=1\nconn rank=1 bundle=O\n1 / 0 0 1 | 0 / 1\n", 1).exit_code == 2);
  // x has poles off the rational places: a domain failure, not an input error.
  CHECK(run_job_text("job tango-certify\nraynaud p=5 l=1\nfunction\n0 1 / 1 | 0 / 1 | 0 / 1 | 0 / 1\n", 1).exit_code == 1);
  const JobResult cert =
      run_job_text("job tango-certify\nraynaud p=5 l=1\nfunction\n1 / 0 0 0 0 0 1 | 0 / 1 | 0 / 1 | 1 / 0 0 0 0 1\n", 1);
  CAPTURE(cert.output);
  CHECK(cert.exit_code == 0);
  CHECK(cert.output.find("D = 2*[0:0:1]") != std::string::npos);
}

TEST_CASE("selftest passes every check") {
  const JobResult r = run_job_text("job selftest\n", 1);
  CHECK(r.exit_code == 0);
  CHECK(r.output.find(" 0 failed") != std::string::npos);
  for (const auto& [name, ok] : selftest_checks(1)) {
    CAPTURE(name);
    CHECK(ok);
  }
}

TEST_CASE("machine output is identical across thread counts") {
  for (const char* text : {"job enumerate monodromy=all pretango=true\nmode machine\np1 p=5 marks=0,1,2,inf\n",
                           "job enumerate pretango=true\nmode machine\nell p=7 a=3 b=5\n",
                           "job miura action=from-pretango\nmode machine\nell p=5 a=3 b=0\n"
                           "conn rank=1 bundle=Omega_log\n0 / 1 | 1 / 0 3 0 1\n",
                           "job selftest\nmode machine\n"}) {
    const JobResult one = run_job_text(text, 1), eight = run_job_text(text, 8);
    CAPTURE(text);
    CHECK(one.exit_code == eight.exit_code);
    CHECK(one.output == eight.output);
    CHECK(run_job_text(text, 1).output == one.output);
  }
}

TEST_CASE("golden enumerate output") {
  struct Case {
    const char* file;
    const char* job;
    fp_t p;
  };
  for (const Case& c : {Case{"enumerate_p1_p5_r3.txt", "p1 p=5 marks=0,1,inf", 5},
                        Case{"enumerate_p1_p3_r4.txt", "p1 p=3 marks=0,1,2,inf", 3}}) {
    CAPTURE(c.file);
    const std::string expected = golden(c.file);
    const JobResult r =
        run_job_text(std::string("job enumerate monodromy=all pretango=true\nmode machine\n") + c.job + "\n", 2);
    CHECK(r.exit_code == 0);
    CHECK(r.output == expected);
    // Cross-check every golden line against the independent oracles.
    std::istringstream is(expected);
    std::string line;
    std::size_t count = 0;
    while (std::getline(is, line)) {
      ++count;
      const std::vector<fp_t> mu = parse_mu(field(line, "mu"));
      CAPTURE(line);
      CHECK(std::stoll(field(line, "flat")) == oracle::genus0_flat_count(mu, c.p));
      const oracle::Q value = oracle::dimension_formula(0, mu, c.p);
      CHECK(parse_q(field(line, "formula")) == value);
      if (value < oracle::Q(0)) CHECK(field(line, "pretango") == "0");
    }
    std::size_t total = 1;
    for (std::size_t k = 0; k < parse_mu(field(expected.substr(0, expected.find('\n')), "mu")).size(); ++k) total *= c.p;
    CHECK(count == total);
  }
  std::string ell;
  for (const char* curve : {"ell p=5 a=3 b=0", "ell p=5 a=3 b=2", "ell p=5 a=3 b=3"})
    ell += run_job_text(std::string("job enumerate pretango=true\nmode machine\n") + curve + "\n", 1).output;
  CHECK(ell == golden("enumerate_ell_p5.txt"));
}

TEST_CASE("shipped job files run cleanly") {
  std::size_t n = 0;
  for (const auto& entry : std::filesystem::directory_iterator(std::string(DORMANT_SOURCE_DIR) + "/data/jobs")) {
    if (entry.path().extension() != ".job") continue;
    ++n;
    const std::string text = slurp(entry.path().string());
    CAPTURE(entry.path().filename().string());
    CHECK(render_job(parse_job(text)) == normalize_job_text(text));
    const JobResult r = run_job_text(text, 1);
    CHECK(r.exit_code == 0);
    CHECK_FALSE(r.output.empty());
  }
  CHECK(n >= 6);
}
