#include "hmcf/network/checkpoint.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "hmcf/error.hpp"

namespace hmcf::nn {

namespace {

constexpr int kFormatVersion = 1;

std::string hexfloat(double v) {
  std::ostringstream os;
  os << std::hexfloat << v;
  return os.str();
}

double parse_double(const std::string& text, const std::string& field) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str()) throw ConfigError("checkpoint: cannot parse " + field + " from '" + text + "'");
  return v;
}

std::string expect_field(std::istream& is, const std::string& key) {
  std::string line;
  if (!std::getline(is, line)) throw ConfigError("checkpoint: missing field '" + key + "'");
  const std::string prefix = key + ":";
  if (line.rfind(prefix, 0) != 0) throw ConfigError("checkpoint: expected '" + key + "', found '" + line + "'");
  auto value = line.substr(prefix.size());
  const auto first = value.find_first_not_of(' ');
  return first == std::string::npos ? std::string{} : value.substr(first);
}

std::size_t parse_count(const std::string& text, const std::string& field) {
  try {
    return static_cast<std::size_t>(std::stoull(text));
  } catch (const std::exception&) {
    throw ConfigError("checkpoint: cannot parse " + field + " from '" + text + "'");
  }
}

}  // namespace

void write_checkpoint(std::ostream& os, const Checkpoint& ckpt) {
  const auto& shape = ckpt.params.shape();
  os << "hmcf-checkpoint\n"
     << "format_version: " << kFormatVersion << "\n"
     << "input_dim: " << shape.input_dim << "\n"
     << "output_dim: " << shape.output_dim << "\n"
     << "hidden_layers: " << shape.hidden_layers << "\n"
     << "hidden_width: " << shape.hidden_width << "\n"
     << "parameter_count: " << ckpt.params.size() << "\n"
     << "step: " << ckpt.step << "\n"
     << "total_loss: " << hexfloat(ckpt.total_loss) << "\n"
     << "values:\n";
  for (double v : ckpt.params.values()) os << hexfloat(v) << "\n";
}

Checkpoint read_checkpoint(std::istream& is) {
  std::string magic;
  std::getline(is, magic);
  if (magic != "hmcf-checkpoint") throw ConfigError("checkpoint: bad magic line '" + magic + "'");
  const auto version = parse_count(expect_field(is, "format_version"), "format_version");
  if (version != kFormatVersion) {
    throw ConfigError("checkpoint: unsupported format_version " + std::to_string(version));
  }
  NetworkShape shape;
  shape.input_dim = parse_count(expect_field(is, "input_dim"), "input_dim");
  shape.output_dim = parse_count(expect_field(is, "output_dim"), "output_dim");
  shape.hidden_layers = parse_count(expect_field(is, "hidden_layers"), "hidden_layers");
  shape.hidden_width = parse_count(expect_field(is, "hidden_width"), "hidden_width");
  shape.validate();
  const auto count = parse_count(expect_field(is, "parameter_count"), "parameter_count");
  if (count != parameter_count(shape)) throw ConfigError("checkpoint: parameter_count does not match shape");
  Checkpoint ckpt;
  ckpt.step = parse_count(expect_field(is, "step"), "step");
  ckpt.total_loss = parse_double(expect_field(is, "total_loss"), "total_loss");
  expect_field(is, "values");
  std::vector<double> values(count);
  std::string line;
  for (std::size_t i = 0; i < count; ++i) {
    if (!std::getline(is, line)) throw ConfigError("checkpoint: truncated parameter list");
    values[i] = parse_double(line, "parameter " + std::to_string(i));
  }
  ckpt.params = ParameterVector(shape, std::move(values));
  return ckpt;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open checkpoint for writing: " + path.string());
  write_checkpoint(os, ckpt);
  if (!os) throw Error("failed writing checkpoint: " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open checkpoint: " + path.string());
  return read_checkpoint(is);
}

}  // namespace hmcf::nn
