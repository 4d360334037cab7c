#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "dormant/error.hpp"
#include "dormant/shell.hpp"

namespace {

std::string read_file(const std::string& path) {
  if (path == "-") {
    std::ostringstream os;
    os << std::cin.rdbuf();
    return os.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// A block argument is a file path, or inline text with ';' separating lines.
std::string block_arg(const std::string& arg) {
  std::error_code ec;
  if (arg == "-" || std::filesystem::is_regular_file(arg, ec)) return read_file(arg);
  std::string s = arg;
  for (char& c : s)
    if (c == ';') c = '\n';
  return s + "\n";
}

struct Global {
  unsigned threads = 1;
  bool machine = false;
};

std::string header(const Global& g, const std::string& job) {
  std::string s = "job " + job + "\n";
  if (g.machine) s += "mode machine\n";
  return s;
}

int emit(const dormant::JobResult& r) {
  std::cout << r.output;
  return r.exit_code;
}

int run_text(const Global& g, const std::string& text) { return emit(dormant::run_job_text(text, g.threads)); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact p-curvature, Cartier, Tango and dormant oper computations on explicit curves"};
  app.require_subcommand(1);
  Global g;
  app.add_option("--threads", g.threads, "Cap on worker threads")->check(CLI::Range(1u, 256u));
  app.add_flag("--machine", g.machine, "Machine-readable key=value output");

  int code = 0;
  std::string curve, payload, file, monodromy;
  bool pretango = false;
  int height = 2;
  int max_results = 8;

  auto* run = app.add_subcommand("run", "Run a job file ('-' reads stdin)");
  run->add_option("file", file)->required();
  run->callback([&] { code = run_text(g, read_file(file)); });

  auto* check = app.add_subcommand("check", "Parse a job file and print its normal form");
  check->add_option("file", file)->required();
  check->callback([&] {
    try {
      std::cout << dormant::render_job(dormant::parse_job(read_file(file)));
    } catch (const dormant::Error& e) {
      std::cout << "error: " << dormant::error_name(e.code()) << ": " << e.detail() << "\n";
      code = 2;
    }
  });

  auto* pcurv = app.add_subcommand("pcurv", "p-curvature of a connection block");
  pcurv->add_option("curve", curve)->required();
  pcurv->add_option("conn", payload)->required();
  pcurv->callback([&] { code = run_text(g, header(g, "pcurv") + curve + "\n" + block_arg(payload)); });

  auto* cart = app.add_subcommand("cartier", "Cartier operator on the form h dx");
  cart->add_option("curve", curve)->required();
  cart->add_option("form", payload)->required();
  cart->callback([&] { code = run_text(g, header(g, "cartier") + curve + "\nform\n" + payload + "\n"); });

  auto* pt = app.add_subcommand("pretango", "Decide whether a connection on Omega_log is pre-Tango");
  pt->add_option("curve", curve)->required();
  pt->add_option("conn", payload)->required();
  pt->callback([&] { code = run_text(g, header(g, "pretango") + curve + "\n" + block_arg(payload)); });

  auto* en = app.add_subcommand("enumerate", "Flat connections on Omega_log with given monodromy");
  en->add_option("curve", curve)->required();
  en->add_option("--monodromy", monodromy, "Comma-separated residues, or 'all' for a sweep");
  en->add_flag("--pretango", pretango, "Also count pre-Tango connections");
  en->callback([&] {
    std::string job = "enumerate pretango=" + std::string(pretango ? "true" : "false");
    if (!monodromy.empty()) job += " monodromy=" + monodromy;
    code = run_text(g, header(g, job) + curve + "\n");
  });

  auto* tc = app.add_subcommand("tango-certify", "Certify a Tango structure df");
  tc->add_option("curve", curve)->required();
  tc->add_option("f", payload)->required();
  tc->callback([&] { code = run_text(g, header(g, "tango-certify") + curve + "\nfunction\n" + payload + "\n"); });

  auto* ts = app.add_subcommand("tango-search", "Search monomials x^i y^j for Tango functions");
  ts->add_option("curve", curve)->required();
  ts->add_option("--height", height)->check(CLI::Range(0, 12));
  ts->add_option("--max", max_results)->check(CLI::Range(1, 1000));
  ts->callback([&] {
    code = run_text(g, header(g, "tango-search height=" + std::to_string(height) + " max=" + std::to_string(max_results)) +
                           curve + "\n");
  });

  auto* miura = app.add_subcommand("miura", "Dormant Miura opers");
  miura->require_subcommand(1);
  auto* from = miura->add_subcommand("from-pretango", "Miura oper of a pre-Tango connection");
  from->add_option("curve", curve)->required();
  from->add_option("conn", payload)->required();
  from->callback([&] { code = run_text(g, header(g, "miura action=from-pretango") + curve + "\n" + block_arg(payload)); });
  auto* expo = miura->add_subcommand("exponent", "Exponents of a serialized oper");
  expo->add_option("oper", file)->required();
  expo->callback([&] { code = run_text(g, header(g, "miura action=exponent") + block_arg(file)); });
  auto* dorm = miura->add_subcommand("dormant", "Dormancy of a serialized oper");
  dorm->add_option("oper", file)->required();
  dorm->callback([&] { code = run_text(g, header(g, "miura action=dormant") + block_arg(file)); });

  auto* ray = app.add_subcommand("raynaud", "Generalized Raynaud surfaces");
  ray->require_subcommand(1);
  auto* build = ray->add_subcommand("build", "Gluing data from a generalized Tango curve file");
  build->add_option("gtc-file", file)->required();
  build->callback([&] { code = run_text(g, header(g, "raynaud action=build") + "gtc\n" + read_file(file) + "\nend\n"); });
  auto* val = ray->add_subcommand("validate", "Validate a surface presentation");
  val->add_option("file", file)->required();
  val->callback([&] {
    std::string body = read_file(file);
    std::istringstream is(body);
    std::string line, rest;
    bool header_seen = false;
    while (std::getline(is, line)) {
      if (!header_seen && line.find_first_not_of(" \t\r") != std::string::npos && line[0] != '#') {
        header_seen = true;
        if (line.rfind("surface", 0) == 0) continue;
      }
      rest += line + "\n";
    }
    code = run_text(g, header(g, "raynaud action=validate") + "surface\n" + rest + "end\n");
  });

  auto* self = app.add_subcommand("selftest", "Run the invariant checks");
  self->callback([&] { code = run_text(g, header(g, "selftest")); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    std::cout << "error: " << e.what() << "\n";
    return 2;
  }
  return code;
}
