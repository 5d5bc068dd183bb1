// CLI smoke tests: exit codes and produced files. Expects the CLI binary
// path as argv[1].
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int g_failures = 0;
std::string g_cli;

void expect(bool ok, const std::string& what) {
  if (ok) {
    std::printf("[pass] %s\n", what.c_str());
  } else {
    std::printf("[FAIL] %s\n", what.c_str());
    ++g_failures;
  }
}

int run(const std::string& args) {
  const std::string cmd = g_cli + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: test_cli <path-to-cli>\n");
    return 2;
  }
  g_cli = argv[1];
  const fs::path dir = fs::temp_directory_path() / "lanesim_cli_test";
  fs::remove_all(dir);
  fs::create_directories(dir);

  expect(run("") == 2, "no subcommand is a usage error (exit 2)");
  expect(run("frobnicate") == 2, "unknown subcommand is a usage error (exit 2)");
  expect(run("train") == 2, "train without --out is a usage error (exit 2)");
  expect(run("eval --model " + (dir / "missing.ckpt").string()) == 1,
         "eval with a missing model is a runtime fault (exit 1)");
  expect(run("--help") == 0, "--help succeeds");
  expect(run("gradcheck") == 0, "gradcheck passes on a correct build");

  // A small end-to-end train/eval/simulate pipeline.
  const fs::path cfg = dir / "tiny.conf";
  {
    std::ofstream out(cfg);
    out << "total_gradient_steps = 300\n"
           "warmup_transitions = 150\n"
           "batch_size = 32\n"
           "replay_capacity = 4000\n"
           "target_sync_period = 100\n"
           "sigma_anneal_steps = 200\n";
  }
  const std::string cfg_arg = " --config " + cfg.string();
  expect(run("train" + cfg_arg + " --seed 5 --out " + (dir / "run").string()) == 0,
         "train exits 0");
  expect(fs::exists(dir / "run" / "metrics.csv"), "train writes metrics.csv");
  expect(fs::exists(dir / "run" / "model.ckpt"), "train writes model.ckpt");

  expect(run("eval --model " + (dir / "run" / "model.ckpt").string() + cfg_arg +
             " --episodes 3 --seed 9 --out " + (dir / "eval.csv").string()) == 0,
         "eval exits 0");
  expect(fs::exists(dir / "eval.csv"), "eval writes the per-episode csv");

  expect(run("simulate" + cfg_arg + " --steps 500 --trace " +
             (dir / "trace.csv").string()) == 0,
         "simulate exits 0");
  expect(fs::exists(dir / "trace.csv"), "simulate writes the trace csv");

  expect(run("train" + cfg_arg + " --seed 5 --out " + (dir / "bad").string() +
             " --bogus-flag") == 2,
         "unknown flag is a usage error (exit 2)");

  fs::remove_all(dir);
  if (g_failures == 0) {
    std::printf("all cli tests passed\n");
    return 0;
  }
  std::printf("%d cli test(s) failed\n", g_failures);
  return 1;
}
