#include "cpi/fusion/config.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "cpi/corpus/vocab.h"

namespace cpi::fusion {

void TrainConfig::validate() const {
  if (!(optimizer.lr >= 0.0)) throw ValidationError("optimizer.lr must be >= 0");
  if (optimizer.lr > 0.0) optimizer.validate();
  if (!(warmup_epochs >= 0.0)) throw ValidationError("optimizer.warmup_epochs must be >= 0");
  if (!(clip_norm >= 0.0)) throw ValidationError("optimizer.clip_norm must be >= 0");
  if (batch_size <= 0) throw ValidationError("batch_size must be positive");
  if (max_epochs <= 0) throw ValidationError("max_epochs must be positive");
  if (patience <= 0) throw ValidationError("patience must be positive");
  if (vocab_max_size <= corpus::Vocab::kReserved) {
    throw ValidationError("vocab.max_size must exceed " + std::to_string(corpus::Vocab::kReserved));
  }
  if (vocab_min_freq == 0) throw ValidationError("vocab.min_freq must be positive");
  gaussian.validate();
}

ModelConfig TrainConfig::model_config(int vocab_size, int num_labels) const {
  ModelConfig m;
  m.encoder = encoder;
  m.encoder.vocab_size = vocab_size;
  m.gaussian = gaussian;
  m.ablated = ablation;
  m.share_encoder = share_encoder;
  m.num_labels = num_labels;
  m.validate();
  return m;
}

double TrainConfig::learning_rate(long step, long steps_per_epoch, long total_steps) const {
  const double warmup = warmup_epochs * static_cast<double>(steps_per_epoch);
  const double t = static_cast<double>(step) + 1.0;
  if (t < warmup) return optimizer.lr * t / warmup;
  if (!decay) return optimizer.lr;
  const double remaining = static_cast<double>(total_steps) - static_cast<double>(step);
  const double span = static_cast<double>(total_steps) - std::min(warmup, static_cast<double>(total_steps - 1));
  return optimizer.lr * std::clamp(remaining / span, 0.0, 1.0);
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_number(const std::string& text) {
  T value{};
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) throw ValidationError("not a number: '" + text + "'");
  return value;
}

double parse_double(const std::string& text) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw ValidationError("not a number: '" + text + "'");
  return value;
}

bool parse_bool(const std::string& text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw ValidationError("not a boolean: '" + text + "'");
}

using Setter = std::function<void(TrainConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"seed", [](TrainConfig& c, const std::string& v) { c.seed = parse_number<std::uint64_t>(v); }},
      {"task", [](TrainConfig& c, const std::string& v) { c.task = parse_task_mode(v); }},
      {"encoder.layers", [](TrainConfig& c, const std::string& v) { c.encoder.layers = parse_number<int>(v); }},
      {"encoder.hidden", [](TrainConfig& c, const std::string& v) { c.encoder.hidden = parse_number<int>(v); }},
      {"encoder.heads", [](TrainConfig& c, const std::string& v) { c.encoder.heads = parse_number<int>(v); }},
      {"encoder.ffn", [](TrainConfig& c, const std::string& v) { c.encoder.ffn = parse_number<int>(v); }},
      {"encoder.max_len", [](TrainConfig& c, const std::string& v) { c.encoder.max_len = parse_number<int>(v); }},
      {"encoder.dropout", [](TrainConfig& c, const std::string& v) { c.encoder.dropout = parse_double(v); }},
      {"gaussian.mu", [](TrainConfig& c, const std::string& v) { c.gaussian.mu = parse_double(v); }},
      {"gaussian.sigma", [](TrainConfig& c, const std::string& v) { c.gaussian.sigma = parse_double(v); }},
      {"gaussian.window", [](TrainConfig& c, const std::string& v) { c.gaussian.window = parse_number<int>(v); }},
      {"gaussian.renormalize", [](TrainConfig& c, const std::string& v) { c.gaussian.renormalize = parse_bool(v); }},
      {"optimizer.lr", [](TrainConfig& c, const std::string& v) { c.optimizer.lr = parse_double(v); }},
      {"optimizer.beta1", [](TrainConfig& c, const std::string& v) { c.optimizer.beta1 = parse_double(v); }},
      {"optimizer.beta2", [](TrainConfig& c, const std::string& v) { c.optimizer.beta2 = parse_double(v); }},
      {"optimizer.eps", [](TrainConfig& c, const std::string& v) { c.optimizer.eps = parse_double(v); }},
      {"optimizer.warmup_epochs", [](TrainConfig& c, const std::string& v) { c.warmup_epochs = parse_double(v); }},
      {"optimizer.decay", [](TrainConfig& c, const std::string& v) { c.decay = parse_bool(v); }},
      {"optimizer.clip_norm", [](TrainConfig& c, const std::string& v) { c.clip_norm = parse_double(v); }},
      {"batch_size", [](TrainConfig& c, const std::string& v) { c.batch_size = parse_number<int>(v); }},
      {"max_epochs", [](TrainConfig& c, const std::string& v) { c.max_epochs = parse_number<int>(v); }},
      {"patience", [](TrainConfig& c, const std::string& v) { c.patience = parse_number<int>(v); }},
      {"ablation", [](TrainConfig& c, const std::string& v) { c.ablation = parse_components(v); }},
      {"share_encoder", [](TrainConfig& c, const std::string& v) { c.share_encoder = parse_bool(v); }},
      {"vocab.max_size", [](TrainConfig& c, const std::string& v) { c.vocab_max_size = parse_number<std::size_t>(v); }},
      {"vocab.min_freq", [](TrainConfig& c, const std::string& v) { c.vocab_min_freq = parse_number<std::size_t>(v); }},
  };
  return table;
}

}  // namespace

TrainConfig parse_train_config(std::istream& in, const std::string& source) {
  TrainConfig config;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string location = source + ":" + std::to_string(line_no);
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw FormatError(location, "expected key = value");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) throw FormatError(location, "unknown key '" + key + "'");
    try {
      it->second(config, value);
    } catch (const ValidationError& e) {
      throw FormatError(location, key + ": " + e.what());
    }
  }
  try {
    config.validate();
  } catch (const ValidationError& e) {
    throw FormatError(source, e.what());
  }
  return config;
}

TrainConfig load_train_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config " + path.string());
  return parse_train_config(in, path.string());
}

std::string format_train_config(const TrainConfig& c) {
  std::ostringstream out;
  out.precision(17);
  out << "seed = " << c.seed << '\n'
      << "task = " << to_string(c.task) << '\n'
      << "encoder.layers = " << c.encoder.layers << '\n'
      << "encoder.hidden = " << c.encoder.hidden << '\n'
      << "encoder.heads = " << c.encoder.heads << '\n'
      << "encoder.ffn = " << c.encoder.ffn << '\n'
      << "encoder.max_len = " << c.encoder.max_len << '\n'
      << "encoder.dropout = " << c.encoder.dropout << '\n'
      << "gaussian.mu = " << c.gaussian.mu << '\n'
      << "gaussian.sigma = " << c.gaussian.sigma << '\n'
      << "gaussian.window = " << c.gaussian.window << '\n'
      << "gaussian.renormalize = " << (c.gaussian.renormalize ? "true" : "false") << '\n'
      << "optimizer.lr = " << c.optimizer.lr << '\n'
      << "optimizer.beta1 = " << c.optimizer.beta1 << '\n'
      << "optimizer.beta2 = " << c.optimizer.beta2 << '\n'
      << "optimizer.eps = " << c.optimizer.eps << '\n'
      << "optimizer.warmup_epochs = " << c.warmup_epochs << '\n'
      << "optimizer.decay = " << (c.decay ? "true" : "false") << '\n'
      << "optimizer.clip_norm = " << c.clip_norm << '\n'
      << "batch_size = " << c.batch_size << '\n'
      << "max_epochs = " << c.max_epochs << '\n'
      << "patience = " << c.patience << '\n'
      << "ablation = " << format_components(c.ablation) << '\n'
      << "share_encoder = " << (c.share_encoder ? "true" : "false") << '\n'
      << "vocab.max_size = " << c.vocab_max_size << '\n'
      << "vocab.min_freq = " << c.vocab_min_freq << '\n';
  return out.str();
}

nlohmann::json to_json(const TrainConfig& c) {
  return {
      {"seed", c.seed},
      {"task", std::string(to_string(c.task))},
      {"optimizer", {{"lr", c.optimizer.lr}, {"beta1", c.optimizer.beta1},
                     {"beta2", c.optimizer.beta2}, {"eps", c.optimizer.eps},
                     {"warmup_epochs", c.warmup_epochs}, {"decay", c.decay},
                     {"clip_norm", c.clip_norm}}},
      {"batch_size", c.batch_size},
      {"max_epochs", c.max_epochs},
      {"patience", c.patience},
      {"vocab", {{"max_size", c.vocab_max_size}, {"min_freq", c.vocab_min_freq}}},
  };
}

}  // namespace cpi::fusion
