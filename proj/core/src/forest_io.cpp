#include "mdnm/forest_io.hpp"

#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>

#include "mdnm/errors.hpp"

namespace mdnm {

void write_forest_records(std::ostream& os, const ColoredForest& forest) {
  os << "# types\t" << forest.types() << '\n';
  os << "# id\tparent\ttype\tlevel\tallelic_generation\tmutant\n";
  for (NodeIndex u = 0; u < forest.size(); ++u) {
    const auto& n = forest.node(u);
    os << u << '\t';
    if (n.is_root())
      os << -1;
    else
      os << n.parent;
    os << '\t' << n.type + 1 << '\t' << n.level << '\t' << n.allelic_generation << '\t'
       << (forest.is_mutant(u) ? 1 : 0) << '\n';
  }
}

namespace {

struct RawRecord {
  long long parent;
  std::uint32_t type;
  std::vector<long long> extra;
  std::size_t line;
  std::vector<long long> children;
};

}  // namespace

ColoredForest read_forest_records(std::istream& is) {
  std::map<long long, RawRecord> records;
  std::vector<long long> file_order;
  std::size_t declared_types = 0;
  std::string text;
  std::size_t line_no = 0;
  while (std::getline(is, text)) {
    ++line_no;
    auto first = text.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (text[first] == '#') {
      std::istringstream hs(text.substr(first + 1));
      std::string key;
      std::size_t value = 0;
      if (hs >> key && key == "types") {
        if (!(hs >> value) || value < 2)
          throw ConfigError("types", "expected an integer >= 2", line_no);
        declared_types = value;
      }
      continue;
    }
    std::istringstream ls(text);
    std::vector<long long> cols;
    long long x;
    while (ls >> x) cols.push_back(x);
    ls.clear();
    std::string rest;
    if (ls >> rest) throw ConfigError("", "non-integer field '" + rest + "'", line_no);
    if (cols.size() < 3)
      throw ConfigError("", "expected at least id, parent and type", line_no);
    if (cols.size() != 3 && cols.size() != 6)
      throw ConfigError("", "expected 3 or 6 columns", line_no);
    if (cols[0] < 0) throw ConfigError("id", "must be nonnegative", line_no);
    if (cols[2] < 1) throw ConfigError("type", "types are numbered from 1", line_no);
    if (records.count(cols[0]))
      throw ConfigError("id", "duplicate id " + std::to_string(cols[0]), line_no);
    RawRecord rec{cols[1], static_cast<std::uint32_t>(cols[2] - 1),
                  std::vector<long long>(cols.begin() + 3, cols.end()), line_no, {}};
    records.emplace(cols[0], std::move(rec));
    file_order.push_back(cols[0]);
  }
  if (records.empty()) throw ConfigError("", "no node records", line_no);

  std::uint32_t max_type = 0;
  for (auto& [id, rec] : records) max_type = std::max(max_type, rec.type);
  std::size_t d = declared_types ? declared_types : std::max<std::size_t>(2, max_type + 1);
  std::vector<long long> roots;
  for (long long id : file_order) {
    auto& rec = records.at(id);
    if (rec.type >= d)
      throw ConfigError("type", "type exceeds declared number of types", rec.line);
    if (rec.parent < 0) {
      roots.push_back(id);
      continue;
    }
    auto p = records.find(rec.parent);
    if (p == records.end())
      throw ConfigError("parent", "unknown parent id " + std::to_string(rec.parent), rec.line);
    p->second.children.push_back(id);
  }
  if (roots.empty())
    throw ConfigError("parent", "no root record (parent -1)", records.at(file_order[0]).line);

  ForestBuilder builder(d);
  std::vector<long long> original;
  std::vector<std::uint32_t> child_types;
  for (long long root : roots) {
    builder.add_root(records.at(root).type);
    original.push_back(root);
    while (auto u = builder.pending()) {
      const auto& rec = records.at(original[*u]);
      child_types.clear();
      for (long long c : rec.children) {
        child_types.push_back(records.at(c).type);
        original.push_back(c);
      }
      builder.expand(child_types);
    }
  }
  if (original.size() != records.size()) {
    std::set<long long> reached(original.begin(), original.end());
    for (long long id : file_order)
      if (!reached.count(id))
        throw ConfigError("parent", "record not connected to a root (cycle?)", records.at(id).line);
  }
  ColoredForest forest = std::move(builder).finish();
  for (NodeIndex u = 0; u < forest.size(); ++u) {
    const auto& rec = records.at(original[u]);
    if (rec.extra.empty()) continue;
    const auto& n = forest.node(u);
    if (rec.extra[0] != n.level)
      throw ConfigError("level", "inconsistent with parent links", rec.line);
    if (rec.extra[1] != n.allelic_generation)
      throw ConfigError("allelic_generation", "inconsistent with parent links", rec.line);
    if (rec.extra[2] != (forest.is_mutant(u) ? 1 : 0))
      throw ConfigError("mutant", "inconsistent with parent links", rec.line);
  }
  return forest;
}

void write_forest_dot(std::ostream& os, const ColoredForest& forest) {
  auto size = forest.subtree_sizes();
  os << "digraph forest {\n";
  for (NodeIndex u = 0; u < forest.size(); ++u)
    os << "  n" << u << " [label=\"" << forest.node(u).type + 1 << ':' << size[u] << "\"];\n";
  for (NodeIndex u = 0; u < forest.size(); ++u)
    if (!forest.node(u).is_root()) os << "  n" << forest.node(u).parent << " -> n" << u << ";\n";
  os << "}\n";
}

}  // namespace mdnm
