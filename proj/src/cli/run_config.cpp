#include <charconv>

#include "netrobust/cli.hpp"
#include "netrobust/errors.hpp"

namespace netrobust::cli {

namespace {

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  T value{};
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size()) {
    throw ParameterError("generator field " + std::string(key) + " has invalid value '" +
                         std::string(text) + "'");
  }
  return value;
}

}  // namespace

GraphSource parse_graph_source(std::string_view text) {
  GraphSource source;
  source.text = std::string(text);
  constexpr std::string_view kPrefix = "gen:";
  if (text.substr(0, kPrefix.size()) != kPrefix) return source;

  text.remove_prefix(kPrefix.size());
  constexpr std::string_view kFamily = "csf:";
  if (text.substr(0, kFamily.size()) != kFamily) {
    throw ParameterError("unknown generator in '" + source.text + "' (expected gen:csf:...)");
  }
  text.remove_prefix(kFamily.size());
  source.generated = true;

  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto field = text.substr(0, comma);
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    const auto eq = field.find('=');
    if (eq == std::string_view::npos) {
      throw ParameterError("generator field '" + std::string(field) + "' lacks '='");
    }
    const auto key = field.substr(0, eq);
    const auto value = field.substr(eq + 1);
    if (key == "n") {
      source.params.n = parse_number<std::size_t>(key, value);
    } else if (key == "m") {
      source.params.m_attach = parse_number<std::size_t>(key, value);
    } else if (key == "p") {
      source.params.p_triangle = parse_number<double>(key, value);
    } else if (key == "seed") {
      source.params.seed = parse_number<std::uint64_t>(key, value);
      source.has_seed = true;
    } else {
      throw ParameterError("unknown generator field '" + std::string(key) + "'");
    }
  }
  const auto& p = source.params;
  if (p.m_attach < 1) throw ParameterError("generator m must be >= 1");
  if (p.n < p.m_attach + 1) throw ParameterError("generator n must be at least m + 1");
  if (!(p.p_triangle >= 0.0 && p.p_triangle <= 1.0)) {
    throw ParameterError("generator p must lie in [0, 1]");
  }
  return source;
}

LoadedGraph load_source(const GraphSource& source) {
  if (!source.generated) return load_edge_list_file(source.text);
  LoadedGraph loaded;
  loaded.graph = generate_clustered_scale_free(source.params);
  loaded.labels.resize(loaded.graph.id_bound());
  for (std::size_t i = 0; i < loaded.labels.size(); ++i) {
    loaded.labels[i] = static_cast<std::int64_t>(i);
  }
  return loaded;
}

}  // namespace netrobust::cli
