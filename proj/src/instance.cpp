#include "devac/instance.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace devac {

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

}  // namespace

std::string Instance::check() const {
  if (exits.empty()) return "instance has no exits";
  std::vector<uint8_t> ex = exit_mask();
  std::vector<uint8_t> seen(g.vertex_count(), 0);
  for (VertexId h : homebases) {
    if (h < 0 || h >= g.vertex_count()) return "homebase out of range";
    if (ex[h]) return "homebase coincides with exit " + g.label(h);
    if (seen[h]) return "duplicate homebase " + g.label(h);
    seen[h] = 1;
  }
  std::vector<uint8_t> seen_x(g.vertex_count(), 0);
  for (VertexId x : exits) {
    if (x < 0 || x >= g.vertex_count()) return "exit out of range";
    if (seen_x[x]) return "duplicate exit " + g.label(x);
    seen_x[x] = 1;
  }
  return "";
}

std::string serialize_instance(const Instance& inst) {
  std::ostringstream out;
  out << "devac-instance 1\n";
  if (!inst.generator.empty()) out << "generator " << inst.generator << "\n";
  out << "seed " << inst.seed << "\n";
  if (inst.grid) {
    out << "grid " << inst.grid_n << "\n";
  } else {
    out << "vertices " << inst.g.vertex_count() << "\n";
    for (VertexId v = 0; v < inst.g.vertex_count(); ++v) {
      out << inst.g.label(v) << "\n";
    }
    out << "edges " << inst.g.edge_count() << "\n";
    for (VertexId v = 0; v < inst.g.vertex_count(); ++v) {
      for (VertexId w : inst.g.neighbors(v)) {
        if (v < w) out << inst.g.label(v) << " " << inst.g.label(w) << "\n";
      }
    }
  }
  out << "exits " << inst.exits.size() << "\n";
  for (VertexId x : inst.exits) out << inst.g.label(x) << "\n";
  out << "homebases " << inst.homebases.size() << "\n";
  for (VertexId h : inst.homebases) out << inst.g.label(h) << "\n";
  return out.str();
}

Instance parse_instance(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || split_ws(line) != std::vector<std::string>{"devac-instance", "1"}) {
    throw std::runtime_error("not a devac instance file (missing header)");
  }
  Instance inst;
  auto next_line = [&](const char* what) {
    if (!std::getline(in, line)) {
      throw std::runtime_error(std::string("unexpected end of file in ") + what);
    }
    return line;
  };
  auto resolve = [&](const std::string& label, const char* what) {
    auto v = inst.g.find_label(label);
    if (!v) {
      throw std::runtime_error(std::string("unknown ") + what + " label: " + label);
    }
    return *v;
  };

  bool have_graph = false;
  while (std::getline(in, line)) {
    auto toks = split_ws(line);
    if (toks.empty()) continue;
    const std::string& key = toks[0];
    if (key == "generator" && toks.size() == 2) {
      inst.generator = toks[1];
    } else if (key == "seed" && toks.size() == 2) {
      inst.seed = std::stoull(toks[1]);
    } else if (key == "grid" && toks.size() == 2) {
      inst.grid_n = std::stoi(toks[1]);
      inst.grid = true;
      inst.g = build_grid(inst.grid_n);
      have_graph = true;
    } else if (key == "vertices" && toks.size() == 2) {
      int count = std::stoi(toks[1]);
      for (int c = 0; c < count; ++c) inst.g.add_vertex(next_line("vertices"));
      have_graph = true;
    } else if (key == "edges" && toks.size() == 2) {
      int count = std::stoi(toks[1]);
      for (int c = 0; c < count; ++c) {
        auto es = split_ws(next_line("edges"));
        if (es.size() != 2) throw std::runtime_error("bad edge line: " + line);
        inst.g.add_edge(resolve(es[0], "edge"), resolve(es[1], "edge"));
      }
    } else if (key == "exits" && toks.size() == 2) {
      if (!have_graph) throw std::runtime_error("exits listed before graph");
      int count = std::stoi(toks[1]);
      for (int c = 0; c < count; ++c) {
        inst.exits.push_back(resolve(next_line("exits"), "exit"));
      }
    } else if (key == "homebases" && toks.size() == 2) {
      if (!have_graph) throw std::runtime_error("homebases listed before graph");
      int count = std::stoi(toks[1]);
      for (int c = 0; c < count; ++c) {
        inst.homebases.push_back(resolve(next_line("homebases"), "homebase"));
      }
    } else {
      throw std::runtime_error("unrecognized instance line: " + line);
    }
  }
  std::string err = inst.check();
  if (!err.empty()) throw std::runtime_error("invalid instance: " + err);
  return inst;
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

void save_instance(const Instance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write instance file: " + path);
  out << serialize_instance(inst);
}

}  // namespace devac
