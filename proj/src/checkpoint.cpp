#include "lanesim/checkpoint.hpp"

#include "lanesim/text.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

namespace lanesim {

namespace {

constexpr const char* kMagic = "lanesim-checkpoint";
constexpr int kFormatVersion = 1;

struct NetRecord {
  const char* name;
  const Mlp* net;
};

void write_net(std::ostream& out, const char* name, const Mlp& net) {
  out << "net " << name << " layers";
  for (int n : net.layer_sizes()) out << ' ' << n;
  out << " head " << head_name(net.head()) << " params " << net.param_count() << '\n';
  std::vector<double> params;
  net.params_to(params);
  for (double p : params) {
    out << format_double_exact(p) << '\n';
  }
}

void read_net(std::istream& in, const char* expected_name, Mlp& net) {
  std::string tag, name, layers_tag, head_tag, head, params_tag;
  if (!(in >> tag >> name) || tag != "net" || name != expected_name) {
    throw CheckpointError("checkpoint: expected net '" + std::string(expected_name) +
                          "'");
  }
  if (!(in >> layers_tag) || layers_tag != "layers") {
    throw CheckpointError("checkpoint: malformed net header for " + name);
  }
  std::vector<int> sizes;
  std::string token;
  while (in >> token) {
    if (token == "head") break;
    try {
      sizes.push_back(std::stoi(token));
    } catch (const std::exception&) {
      throw CheckpointError("checkpoint: malformed layer size '" + token + "'");
    }
  }
  if (token != "head" || !(in >> head >> params_tag) || params_tag != "params") {
    throw CheckpointError("checkpoint: malformed net header for " + name);
  }
  std::size_t declared = 0;
  if (!(in >> declared)) {
    throw CheckpointError("checkpoint: malformed parameter count for " + name);
  }

  if (sizes != net.layer_sizes() || head != head_name(net.head())) {
    throw CheckpointError("checkpoint: architecture mismatch for net " + name);
  }
  if (declared != net.param_count()) {
    std::ostringstream msg;
    msg << "checkpoint: net " << name << " declares " << declared
        << " parameters, expected " << net.param_count();
    throw CheckpointError(msg.str());
  }

  std::vector<double> params;
  params.reserve(declared);
  for (std::size_t i = 0; i < declared; ++i) {
    if (!(in >> token)) {
      std::ostringstream msg;
      msg << "checkpoint: net " << name << " truncated at parameter " << i << " of "
          << declared;
      throw CheckpointError(msg.str());
    }
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (end == token.c_str() || *end != '\0') {
      throw CheckpointError("checkpoint: unparsable parameter '" + token + "' in net " +
                            name);
    }
    params.push_back(v);
  }
  net.params_from(params);
}

}  // namespace

void save_checkpoint(const QuadraticQ& q, const RunConfig& config_echo,
                     const CheckpointMeta& meta, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open checkpoint for writing: " + path);

  out << kMagic << " v" << kFormatVersion << '\n';
  out << "seed " << meta.seed << '\n';
  out << "steps " << meta.steps << '\n';
  out << "b_compose " << b_compose_name(q.mode()) << '\n';

  const std::string config_text = serialize_run_config(config_echo);
  std::size_t config_lines = 0;
  for (char ch : config_text) {
    if (ch == '\n') ++config_lines;
  }
  out << "config " << config_lines << '\n' << config_text;

  const NetRecord nets[] = {{"A", &q.net_a()},
                            {"C", &q.net_c()},
                            {"B_pre", &q.net_b_pre()},
                            {"B_sen", &q.net_b_sen()},
                            {"B_max", &q.net_b_max()}};
  for (const auto& rec : nets) write_net(out, rec.name, *rec.net);
  out << "end\n";
  if (!out) throw std::runtime_error("failed writing checkpoint: " + path);
}

LoadedCheckpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path);

  std::string magic, version;
  if (!(in >> magic >> version) || magic != kMagic || version != "v1") {
    throw CheckpointError("checkpoint: unrecognized header in " + path);
  }

  std::string tag;
  LoadedCheckpoint loaded;
  if (!(in >> tag >> loaded.meta.seed) || tag != "seed") {
    throw CheckpointError("checkpoint: missing seed");
  }
  if (!(in >> tag >> loaded.meta.steps) || tag != "steps") {
    throw CheckpointError("checkpoint: missing step count");
  }
  std::string mode_name;
  if (!(in >> tag >> mode_name) || tag != "b_compose") {
    throw CheckpointError("checkpoint: missing b_compose mode");
  }
  BComposeMode mode;
  try {
    mode = b_compose_from_name(mode_name);
  } catch (const std::exception&) {
    throw CheckpointError("checkpoint: unknown b_compose mode '" + mode_name + "'");
  }

  std::size_t config_lines = 0;
  if (!(in >> tag >> config_lines) || tag != "config") {
    throw CheckpointError("checkpoint: missing config echo");
  }
  std::string line;
  std::getline(in, line);  // consume end of the config header line
  for (std::size_t i = 0; i < config_lines; ++i) {
    if (!std::getline(in, line)) {
      throw CheckpointError("checkpoint: truncated config echo");
    }
    loaded.config_echo += line;
    loaded.config_echo += '\n';
  }

  loaded.model = QuadraticQ(mode);
  read_net(in, "A", loaded.model.net_a());
  read_net(in, "C", loaded.model.net_c());
  read_net(in, "B_pre", loaded.model.net_b_pre());
  read_net(in, "B_sen", loaded.model.net_b_sen());
  read_net(in, "B_max", loaded.model.net_b_max());

  if (!(in >> tag) || tag != "end") {
    throw CheckpointError("checkpoint: missing end marker");
  }
  return loaded;
}

}  // namespace lanesim
