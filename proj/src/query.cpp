#include <cmath>

#include "semcorpus/complementarity.hpp"
#include "semcorpus/geo_profiles.hpp"
#include "semcorpus/keyword_network.hpp"
#include "semcorpus/service.hpp"

namespace semcorpus {
namespace {

using nlohmann::json;

std::vector<std::string> segments(const std::string& path) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i <= path.size()) {
    const auto j = std::min(path.find('/', i), path.size());
    if (j > i) out.push_back(path.substr(i, j - i));
    i = j + 1;
  }
  return out;
}

std::string param(const QueryParams& p, const std::string& key, const std::string& fallback) {
  const auto it = p.find(key);
  return it == p.end() || it->second.empty() ? fallback : it->second;
}

double number(const QueryParams& p, const std::string& key, double fallback) {
  const auto raw = param(p, key, "");
  if (raw.empty()) return fallback;
  try {
    std::size_t used = 0;
    const double x = std::stod(raw, &used);
    if (used != raw.size() || !std::isfinite(x)) throw std::invalid_argument(raw);
    return x;
  } catch (const std::exception&) {
    throw InputError("parameter '" + key + "' is not a number: " + raw);
  }
}

std::size_t count(const QueryParams& p, const std::string& key, std::size_t fallback) {
  const double x = number(p, key, static_cast<double>(fallback));
  if (x < 1 || x != std::floor(x)) throw InputError("parameter '" + key + "' must be a positive integer");
  return static_cast<std::size_t>(x);
}

void check_method(const std::string& m) {
  if (m != "keywords" && m != "citations" && m != "topics")
    throw InputError("unknown method '" + m + "' (expected keywords, citations or topics)");
}

json transpose(const json& rows) {
  json out = json::array();
  if (rows.empty()) return out;
  for (std::size_t j = 0; j < rows[0].size(); ++j) {
    json col = json::array();
    for (const auto& r : rows) col.push_back(r[j]);
    out.push_back(col);
  }
  return out;
}

class Snap {
public:
  Snap(const Workspace& ws, std::string id) : ws_(ws), id_(std::move(id)) {
    if (!ws_.has(id_)) throw NotFound("snapshot '" + id_ + "' not found");
    config_ = json::parse(ws_.read(id_, "config.json"));
    skipped_ = json::parse(ws_.read(id_, "skipped.json"));
  }

  json file(const std::string& name) const { return json::parse(ws_.read(id_, name)); }
  bool has(const std::string& name) const { return ws_.exists(id_, name); }

  Response ok(json data) const { return {200, {{"snapshot_id", id_}, {"config", config_}, {"data", std::move(data)}}}; }
  Response not_computed(const std::string& reason) const {
    return {200, {{"snapshot_id", id_}, {"config", config_}, {"data", nullptr}, {"not_computed", reason}}};
  }
  bool skipped(const std::string& module) const { return skipped_.contains(module); }
  std::string reason(const std::string& module) const {
    return skipped_.contains(module) ? skipped_[module].get<std::string>() : "not computed";
  }

  Response stored(const std::string& name, const std::string& module) const {
    return has(name) ? ok(file(name)) : not_computed(reason(module));
  }

  std::optional<Classification> classification(const std::string& method) const {
    const auto name = "classifications/" + method + ".json";
    if (!has(name)) return std::nullopt;
    return classification_from_json(file(name));
  }

  const json& config() const { return config_; }

private:
  const Workspace& ws_;
  std::string id_;
  json config_;
  json skipped_;
};

Response field(const Snap& s, const std::string& keyword) {
  const auto net = semantic_network_from_json(s.file("keyword_network.json"));
  return s.ok(to_json(semantic_field(net, keyword)));
}

Response wordcloud(const Snap& s, const std::string& id) {
  if (!s.has("wordclouds.json")) return s.not_computed(s.reason("citations"));
  const auto clouds = s.file("wordclouds.json");
  if (!clouds.contains(id)) throw NotFound("no wordcloud for article '" + id + "'");
  return s.ok(clouds[id]);
}

Response evolution(const Snap& s, const QueryParams& p) {
  if (!s.has("topics.json")) return s.not_computed(s.reason("topics"));
  const double threshold = number(p, "threshold", s.config()["topics"]["evolution_threshold"].get<double>());
  const auto model = topic_model_from_json(s.file("topics.json")["model"]);
  const auto corpus = corpus_from_json(s.file("corpus.json"));
  return s.ok(evolution_json(topic_evolution(model, corpus, threshold), threshold));
}

Response clusters(const Snap& s, const QueryParams& p) {
  const auto method = param(p, "method", "keywords");
  check_method(method);
  const auto allocation = parse_allocation(param(p, "allocation", "studied"));
  const auto name = method + "_" + allocation_name(allocation);
  if (!s.has("profiles/" + name + ".json")) return s.not_computed(s.reason(method));
  if (!s.has("clusters/" + name + ".json")) return s.not_computed("no country profile for " + name);
  const auto stored = s.file("clusters/" + name + ".json");
  const std::size_t k = count(p, "k", s.config()["geo"]["k"].get<std::size_t>());
  if (k == stored["k"].get<std::size_t>()) return s.ok(stored);
  const auto set = profile_set_from_json(s.file("profiles/" + name + ".json"));
  return s.ok(to_json(cut(set, dendrogram_from_json(stored["dendrogram"]), k)));
}

Response compare(const Snap& s, const std::string& what, const QueryParams& p) {
  const auto a = param(p, "a", ""), b = param(p, "b", "");
  if (a.empty() || b.empty()) throw InputError("parameters 'a' and 'b' are required");
  check_method(a);
  check_method(b);
  if (what != "flows" && what != "correlations" && what != "modularity") throw NotFound("no resource 'complementarity/" + what + "'");
  const auto ca = s.classification(a), cb = s.classification(b);
  if (!ca) return s.not_computed(s.reason(a));
  if (!cb) return s.not_computed(s.reason(b));

  if (a == b) {
    const auto& cfg = s.config()["complementarity"];
    if (what == "flows") return s.ok(to_json(flow_matrix(*ca, *cb)));
    if (what == "correlations")
      return s.ok(to_json(correlation_report(*ca, *cb, cfg["b"].get<std::size_t>(), s.config()["seed"].get<std::uint64_t>(),
                                             cfg["shuffle_fraction"].get<double>())));
    return s.ok(to_json(modularity_curve(*ca, *cb, cfg["thresholds"].get<std::vector<double>>())));
  }
  const auto direct = "complementarity/" + a + "_" + b + "/" + what + ".json";
  if (s.has(direct)) return s.ok(s.file(direct));
  for (const auto& pair : {a + "_" + b, b + "_" + a})
    if (s.skipped("complementarity/" + pair)) return s.not_computed(s.reason("complementarity/" + pair));
  const auto mirrored = "complementarity/" + b + "_" + a + "/" + what + ".json";
  auto j = s.file(mirrored);
  std::swap(j["method_a"], j["method_b"]);
  std::swap(j["categories_a"], j["categories_b"]);
  if (what == "flows") {
    FlowMatrix f;
    f.method_a = a;
    f.method_b = b;
    f.categories_a = j["categories_a"].get<std::vector<std::string>>();
    f.categories_b = j["categories_b"].get<std::vector<std::string>>();
    const auto rows = transpose(j["flows"]);
    f.flows = Matrix(rows.size(), f.categories_b.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t k = 0; k < rows[i].size(); ++k) f.flows(i, k) = rows[i][k].get<double>();
    j["flows"] = rows;
    j["sankey"] = sankey_json(f);
  } else {
    j["rho"] = transpose(j["rho"]);
  }
  return s.ok(j);
}

Response route(const Workspace& ws, const std::vector<std::string>& seg, const QueryParams& p) {
  if (seg.size() == 1 && seg[0] == "snapshots") return {200, {{"snapshots", ws.list()}}};
  if (seg.size() < 2) throw NotFound("no resource '/" + (seg.empty() ? std::string{} : seg[0]) + "'");
  const Snap s(ws, seg[0]);
  const std::vector<std::string> r(seg.begin() + 1, seg.end());
  const auto is = [&](std::initializer_list<const char*> want) {
    if (r.size() != want.size()) return false;
    std::size_t i = 0;
    for (const auto* w : want)
      if (r[i++] != w) return false;
    return true;
  };
  if (is({"corpus", "stats"})) return s.ok(s.file("corpus_stats.json"));
  if (is({"geo", "flows"})) return s.ok(s.file("geo_flows.json"));
  if (is({"networks", "keywords"})) return s.ok(s.file("keyword_network.json"));
  if (r.size() >= 4 && r[0] == "networks" && r[1] == "keywords" && r[2] == "field") {
    std::string keyword = r[3];
    for (std::size_t i = 4; i < r.size(); ++i) keyword += "/" + r[i];
    return field(s, keyword);
  }
  if (is({"networks", "citations"})) return s.stored("citation_network.json", "citations");
  if (r.size() == 3 && r[0] == "articles" && r[2] == "wordcloud") return wordcloud(s, r[1]);
  if (is({"topics"})) return s.stored("topics.json", "topics");
  if (is({"topics", "evolution"})) return evolution(s, p);
  if (is({"countries", "clusters"})) return clusters(s, p);
  if (r.size() == 2 && r[0] == "complementarity") return compare(s, r[1], p);
  std::string joined;
  for (const auto& x : r) joined += "/" + x;
  throw NotFound("no resource '" + joined + "'");
}

}  // namespace

std::pair<std::string, QueryParams> split_target(const std::string& target) {
  const auto q = target.find('?');
  QueryParams params;
  if (q != std::string::npos) {
    std::size_t i = q + 1;
    while (i < target.size()) {
      const auto amp = std::min(target.find('&', i), target.size());
      const auto item = target.substr(i, amp - i);
      const auto eq = item.find('=');
      if (!item.empty()) params[item.substr(0, eq)] = eq == std::string::npos ? "" : item.substr(eq + 1);
      i = amp + 1;
    }
  }
  return {target.substr(0, q), params};
}

Response query(const Workspace& ws, const std::string& path, const QueryParams& params) {
  try {
    return route(ws, segments(path), params);
  } catch (const NotFound& e) {
    return {404, {{"error", e.what()}}};
  } catch (const InputError& e) {
    return {400, {{"error", e.what()}}};
  } catch (const json::exception& e) {
    return {500, {{"error", std::string("corrupt snapshot file: ") + e.what()}}};
  }
}

}  // namespace semcorpus
