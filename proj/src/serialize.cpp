#include "trisim/serialize.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace trisim {

namespace {

using nlohmann::json;

std::string edge_key(const Edge& e) {
  std::ostringstream os;
  os << e.first << "-" << e.second;
  return os.str();
}

Edge edge_from_key(const std::string& s) {
  auto dash = s.find('-');
  if (dash == std::string::npos)
    throw std::invalid_argument("bad edge key: " + s);
  return make_edge(std::stoi(s.substr(0, dash)), std::stoi(s.substr(dash + 1)));
}

json embedding_to_json(const EmbeddingState& e) { return json(e.m); }

EmbeddingState embedding_from_json(const json& j, const KernelSpec& k) {
  EmbeddingState e;
  e.m = j.get<std::vector<double>>();
  if (e.m.size() != k.components())
    throw std::invalid_argument("filter state has wrong component count");
  return e;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::string format_double(double x) { return json(x).dump(); }

json hypergraph_to_json(const TriadicHypergraph& h) {
  json j;
  j["n_agents"] = h.n_agents();
  j["triads"] = json::array();
  for (const Triad& t : h.triads()) j["triads"].push_back({t[0], t[1], t[2]});
  json w = json::object();
  for (const auto& [e, val] : h.explicit_weights()) w[edge_key(e)] = val;
  j["edge_weights"] = w;
  return j;
}

TriadicHypergraph hypergraph_from_json(const json& j) {
  TriadicHypergraph h(j.at("n_agents").get<int>());
  for (const auto& t : j.at("triads")) {
    if (!t.is_array() || t.size() != 3)
      throw std::invalid_argument("triad entries must be 3-element arrays");
    h.add_triad(make_triad(t[0].get<int>(), t[1].get<int>(), t[2].get<int>()));
  }
  if (j.contains("edge_weights"))
    for (const auto& [key, val] : j.at("edge_weights").items()) {
      Edge e = edge_from_key(key);
      h.set_weight(e.first, e.second, val.get<double>());
    }
  return h;
}

json snapshot_to_json(const Configuration& c) {
  json j;
  j["time"] = c.time;
  j["reservoir"] = c.reservoir;
  j["hypergraph"] = hypergraph_to_json(c.hyper);

  j["agents"] = json::array();
  for (const auto& a : c.agents) {
    json ja;
    ja["knowledge"] = a.knowledge.p;
    ja["opinion"] = json::array();
    for (std::int8_t s : a.opinion) ja["opinion"].push_back(static_cast<int>(s));
    ja["temperature"] = a.temperature;
    ja["phi"] = a.phi;
    ja["theta"] = a.theta;
    ja["memory"] = a.memory;
    j["agents"].push_back(std::move(ja));
  }

  j["blocks"] = json::array();
  for (std::size_t k = 0; k < c.blocks.size(); ++k) {
    const TriadBlock& b = c.blocks[k];
    const Triad& t = c.hyper.triads()[k];
    json jb;
    jb["triad"] = {t[0], t[1], t[2]};
    jb["roles"] = {role_name(b.roles[0]), role_name(b.roles[1]),
                   role_name(b.roles[2])};
    jb["G1"] = b.gan.G1;
    jb["G2"] = b.gan.G2;
    jb["D"] = b.gan.D;
    jb["success_filt"] = embedding_to_json(b.success_filt);
    jb["nonlocal_filt"] = embedding_to_json(b.nonlocal_filt);
    jb["nodemem_filt"] = embedding_to_json(b.nodemem_filt);
    j["blocks"].push_back(std::move(jb));
  }

  j["role_filt"] = {embedding_to_json(c.role_filt[0]),
                    embedding_to_json(c.role_filt[1]),
                    embedding_to_json(c.role_filt[2])};
  json ef = json::object();
  for (const auto& [e, st] : c.edge_filt) ef[edge_key(e)] = embedding_to_json(st);
  j["edge_filt"] = ef;
  j["global_filt"] = embedding_to_json(c.global_filt);

  j["baselines"] = {{"q1", c.q1_init}, {"q2", c.q2_init}, {"q3", c.q3_init}};
  return j;
}

Configuration snapshot_from_json(const json& j, const ModelParams& mp) {
  Configuration c;
  c.hyper = hypergraph_from_json(j.at("hypergraph"));
  if (c.hyper.n_agents() != mp.n_agents)
    throw std::invalid_argument("snapshot agent count differs from parameters");
  c.time = j.at("time").get<double>();
  c.reservoir = j.at("reservoir").get<double>();

  for (const auto& ja : j.at("agents")) {
    AgentState a;
    a.knowledge.p = ja.at("knowledge").get<std::vector<double>>();
    if (a.knowledge.p.size() != static_cast<std::size_t>(mp.n_theta))
      throw std::invalid_argument("knowledge grid size mismatch");
    for (const auto& s : ja.at("opinion")) {
      int v = s.get<int>();
      if (v != 1 && v != -1)
        throw std::invalid_argument("opinion entries must be +1/-1");
      a.opinion.push_back(static_cast<std::int8_t>(v));
    }
    if (a.opinion.size() != static_cast<std::size_t>(mp.m))
      throw std::invalid_argument("opinion length mismatch");
    a.temperature = ja.at("temperature").get<double>();
    a.phi = ja.at("phi").get<double>();
    a.theta = ja.at("theta").get<double>();
    a.memory = ja.at("memory").get<double>();
    c.agents.push_back(std::move(a));
  }
  if (c.agents.size() != static_cast<std::size_t>(mp.n_agents))
    throw std::invalid_argument("agent list length mismatch");

  std::map<Triad, TriadBlock> by_triad;
  for (const auto& jb : j.at("blocks")) {
    const auto& jt = jb.at("triad");
    Triad t = make_triad(jt[0].get<int>(), jt[1].get<int>(), jt[2].get<int>());
    TriadBlock b;
    for (int s = 0; s < 3; ++s)
      b.roles[static_cast<std::size_t>(s)] =
          role_from_name(jb.at("roles")[static_cast<std::size_t>(s)]
                             .get<std::string>());
    b.gan.G1 = jb.at("G1").get<std::vector<double>>();
    b.gan.G2 = jb.at("G2").get<std::vector<double>>();
    b.gan.D = jb.at("D").get<std::vector<double>>();
    if (b.gan.G1.size() != static_cast<std::size_t>(mp.p) ||
        b.gan.G2.size() != static_cast<std::size_t>(mp.p) ||
        b.gan.D.size() != static_cast<std::size_t>(mp.p))
      throw std::invalid_argument("adversarial vector dimension mismatch");
    b.success_filt = embedding_from_json(jb.at("success_filt"), mp.kernel);
    b.nonlocal_filt = embedding_from_json(jb.at("nonlocal_filt"), mp.kernel);
    b.nodemem_filt = embedding_from_json(jb.at("nodemem_filt"), mp.kernel);
    by_triad[t] = std::move(b);
  }
  for (const Triad& t : c.hyper.triads()) {
    auto it = by_triad.find(t);
    if (it == by_triad.end())
      throw std::invalid_argument("active triad without a block");
    c.blocks.push_back(std::move(it->second));
    by_triad.erase(it);
  }
  if (!by_triad.empty())
    throw std::invalid_argument("block for an inactive triad");

  const auto& rf = j.at("role_filt");
  for (int r = 0; r < 3; ++r)
    c.role_filt[static_cast<std::size_t>(r)] =
        embedding_from_json(rf[static_cast<std::size_t>(r)], mp.kernel);
  for (const auto& [key, val] : j.at("edge_filt").items()) {
    Edge e = edge_from_key(key);
    if (!c.hyper.has_edge(e.first, e.second))
      throw std::invalid_argument("filter channel for a missing edge: " + key);
    c.edge_filt[e] = embedding_from_json(val, mp.kernel);
  }
  for (const Edge& e : c.hyper.edges())
    if (!c.edge_filt.count(e))
      throw std::invalid_argument("2-section edge without a filter channel: " +
                                  edge_key(e));
  c.global_filt = embedding_from_json(j.at("global_filt"), mp.kernel);

  const auto& bl = j.at("baselines");
  c.q1_init = bl.at("q1").get<double>();
  c.q2_init = bl.at("q2").get<std::vector<long>>();
  c.q3_init = bl.at("q3").get<double>();
  return c;
}

void write_event_log_csv(const std::string& path, const EventLog& log) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "time,kind,agent,triad,detail\n";
  for (const EventRecord& e : log)
    out << format_double(e.time) << "," << csv_escape(e.kind) << "," << e.agent
        << "," << csv_escape(e.triad) << "," << csv_escape(e.detail) << "\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_observables_csv(
    const std::string& path, const std::vector<double>& times,
    const std::vector<std::pair<std::string, std::vector<double>>>& columns) {
  for (const auto& [name, vals] : columns)
    if (vals.size() != times.size())
      throw std::invalid_argument("column length mismatch: " + name);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "time";
  for (const auto& [name, vals] : columns) out << "," << csv_escape(name);
  out << "\n";
  for (std::size_t k = 0; k < times.size(); ++k) {
    out << format_double(times[k]);
    for (const auto& [name, vals] : columns) out << "," << format_double(vals[k]);
    out << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace trisim
