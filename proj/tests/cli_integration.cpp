// End-to-end checks of the installed CLI binary: exit codes and output files.
#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int failures = 0;

void expect(bool ok, const std::string& what) {
  if (!ok) {
    ++failures;
    std::fprintf(stderr, "FAIL: %s\n", what.c_str());
  }
}

int run(const std::string& cmd) {
  const int status = std::system((cmd + " >/dev/null 2>&1").c_str());
  if (status < 0) return -1;
  return WEXITSTATUS(status);
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

}  // namespace

int main() {
  const std::string cli = HYRAD_CLI_PATH;
  const fs::path dir = fs::temp_directory_path() / "hyrad_cli_integration";
  fs::remove_all(dir);
  fs::create_directories(dir);

  const fs::path good = dir / "good.cfg";
  write_file(good,
             "[scenario]\nn = 4\nl = 4\np = 2\ni = 2\n"
             "gamma_r_db = 5\ngamma_c_db = 4\nk = 0\n"
             "[algorithm]\nmode = SYNC\nseed = 3\n");

  const fs::path out = dir / "out";
  expect(run(cli + " design --config " + good.string() + " --out " +
             out.string()) == 0,
         "valid design run exits 0");
  expect(fs::exists(out / "run_metadata.txt"), "metadata written");
  expect(fs::exists(out / "design_point.csv"), "design point written");
  expect(fs::exists(out / "convergence.csv"), "trace written");

  // seed flag overrides the config seed
  expect(run(cli + " design --config " + good.string() + " --out " +
             (dir / "out_seed").string() + " --seed 9") == 0,
         "seed override run exits 0");
  {
    std::ifstream md(dir / "out_seed" / "run_metadata.txt");
    std::string line;
    bool found = false;
    while (std::getline(md, line)) {
      if (line == "algorithm.seed=9") found = true;
    }
    expect(found, "seed flag takes precedence over config");
  }

  const fs::path bad = dir / "bad.cfg";
  write_file(bad, "[scenario]\nnope = 1\n");
  expect(run(cli + " design --config " + bad.string() + " --out " +
             (dir / "out_bad").string()) == 2,
         "schema violation exits 2");

  const fs::path bad2 = dir / "bad2.cfg";
  write_file(bad2, "[scenario]\nn = 4\nl = 4\np = 2\ni = 2\nk = 9\n");
  expect(run(cli + " design --config " + bad2.string() + " --out " +
             (dir / "out_bad2").string()) == 2,
         "invalid window configuration exits 2");

  expect(run(cli + " bogus-subcommand") != 0, "unknown subcommand fails");

  if (failures == 0) std::puts("cli_integration: all checks passed");
  return failures == 0 ? 0 : 1;
}
