#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "bnt/graph.hpp"

namespace bnt {

struct IngestResult {
  Graph graph;
  std::size_t self_loops_dropped = 0;
  std::size_t multi_edges_collapsed = 0;
};

namespace detail {

struct XmlElement {
  std::string name;
  std::map<std::string, std::string> attrs;
  std::string text;  // text until the closing tag, for <data> elements
  bool closing = false;
  std::size_t line = 0;
};

/// Minimal scanner for the GraphML subset: elements, attributes, and the
/// text content of <data> elements. Enough for Topology Zoo style files;
/// anything structurally off throws ParseError with a line number.
class XmlScanner {
 public:
  explicit XmlScanner(std::string content) : text_(std::move(content)) {}

  bool next(XmlElement& out) {
    while (pos_ < text_.size()) {
      std::size_t open = text_.find('<', pos_);
      if (open == std::string::npos) return false;
      count_lines(pos_, open);
      std::size_t close = text_.find('>', open);
      if (close == std::string::npos)
        throw ParseError("unterminated element", line_);
      std::string_view body(text_.data() + open + 1, close - open - 1);
      pos_ = close + 1;
      if (body.empty()) throw ParseError("empty element", line_);
      if (body[0] == '?' || body[0] == '!') continue;  // prolog, comments
      out = XmlElement{};
      out.line = line_;
      if (body[0] == '/') {
        out.closing = true;
        out.name = std::string(body.substr(1));
        trim(out.name);
        return true;
      }
      bool self_closing = body.back() == '/';
      if (self_closing) body.remove_suffix(1);
      parse_tag(body, out);
      if (!self_closing && out.name == "data") {
        std::size_t end = text_.find("</data>", pos_);
        if (end == std::string::npos)
          throw ParseError("unterminated data element", line_);
        out.text = text_.substr(pos_, end - pos_);
        count_lines(pos_, end);
        pos_ = text_.find('>', end) + 1;
      }
      return true;
    }
    return false;
  }

 private:
  void count_lines(std::size_t from, std::size_t to) {
    for (std::size_t i = from; i < to && i < text_.size(); ++i)
      if (text_[i] == '\n') ++line_;
  }
  static void trim(std::string& s) {
    while (!s.empty() && (s.back() == ' ' || s.back() == '\n')) s.pop_back();
    while (!s.empty() && (s.front() == ' ' || s.front() == '\n'))
      s.erase(s.begin());
  }
  void parse_tag(std::string_view body, XmlElement& out) {
    std::size_t i = 0;
    while (i < body.size() && !isspace(static_cast<unsigned char>(body[i])))
      ++i;
    out.name = std::string(body.substr(0, i));
    while (i < body.size()) {
      while (i < body.size() && isspace(static_cast<unsigned char>(body[i])))
        ++i;
      if (i >= body.size()) break;
      std::size_t eq = body.find('=', i);
      if (eq == std::string_view::npos)
        throw ParseError("malformed attribute in <" + out.name + ">", line_);
      std::string key(body.substr(i, eq - i));
      std::size_t q1 = body.find('"', eq);
      if (q1 == std::string_view::npos)
        throw ParseError("unquoted attribute in <" + out.name + ">", line_);
      std::size_t q2 = body.find('"', q1 + 1);
      if (q2 == std::string_view::npos)
        throw ParseError("unterminated attribute in <" + out.name + ">",
                         line_);
      out.attrs[key] = std::string(body.substr(q1 + 1, q2 - q1 - 1));
      i = q2 + 1;
    }
  }

  std::string text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

}  // namespace detail

/// Reads the GraphML subset used by public topology datasets: node and edge
/// elements, an optional string label attribute, edgedefault on the graph
/// element (undirected when absent). Multi-edges are collapsed and
/// self-loops dropped, both counted in the result.
inline IngestResult ingest_graphml(std::istream& in) {
  std::stringstream buffer;
  buffer << in.rdbuf();
  detail::XmlScanner scanner(buffer.str());

  bool directed = false;
  bool saw_graph = false;
  std::vector<std::string> node_order;
  std::map<std::string, NodeId> node_ids;
  std::map<std::string, std::string> node_labels;
  std::vector<std::pair<std::string, std::string>> edge_refs;
  std::vector<std::size_t> edge_lines;
  std::string label_key = "label";
  std::string current_node;

  detail::XmlElement el;
  while (scanner.next(el)) {
    if (el.closing) {
      if (el.name == "node") current_node.clear();
      continue;
    }
    if (el.name == "graph") {
      saw_graph = true;
      auto it = el.attrs.find("edgedefault");
      directed = it != el.attrs.end() && it->second == "directed";
    } else if (el.name == "key") {
      // remember which key id carries the human label
      auto name = el.attrs.find("attr.name");
      auto id = el.attrs.find("id");
      if (name != el.attrs.end() && id != el.attrs.end() &&
          name->second == "label")
        label_key = id->second;
    } else if (el.name == "node") {
      auto id = el.attrs.find("id");
      if (id == el.attrs.end())
        throw ParseError("node without id", el.line);
      if (!node_ids.count(id->second)) {
        node_ids[id->second] = NodeId(node_order.size());
        node_order.push_back(id->second);
      }
      current_node = id->second;
    } else if (el.name == "edge") {
      auto s = el.attrs.find("source");
      auto t = el.attrs.find("target");
      if (s == el.attrs.end() || t == el.attrs.end())
        throw ParseError("edge without source/target", el.line);
      edge_refs.emplace_back(s->second, t->second);
      edge_lines.push_back(el.line);
    } else if (el.name == "data" && !current_node.empty()) {
      auto key = el.attrs.find("key");
      if (key != el.attrs.end() && key->second == label_key)
        node_labels[current_node] = el.text;
    }
  }
  if (!saw_graph) throw ParseError("no <graph> element found", 1);
  if (node_order.empty()) throw DomainError("ingested graph is empty");

  IngestResult result{Graph(node_order.size(), directed)};
  for (std::size_t i = 0; i < edge_refs.size(); ++i) {
    auto su = node_ids.find(edge_refs[i].first);
    auto sv = node_ids.find(edge_refs[i].second);
    if (su == node_ids.end() || sv == node_ids.end())
      throw ParseError("edge references unknown node", edge_lines[i]);
    if (su->second == sv->second) {
      ++result.self_loops_dropped;
      continue;
    }
    if (!result.graph.add_edge(su->second, sv->second))
      ++result.multi_edges_collapsed;
  }
  for (std::size_t i = 0; i < node_order.size(); ++i) {
    auto it = node_labels.find(node_order[i]);
    result.graph.set_label(NodeId(i), it == node_labels.end()
                                          ? node_order[i]
                                          : it->second);
  }
  return result;
}

inline IngestResult ingest_graphml_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path, 0);
  return ingest_graphml(in);
}

/// Canonical writer for the same subset; ingest(write(g)) == g.
inline void write_graphml(const Graph& g, std::ostream& out) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n";
  out << "  <key id=\"label\" for=\"node\" attr.name=\"label\" "
         "attr.type=\"string\"/>\n";
  out << "  <graph id=\"G\" edgedefault=\""
      << (g.is_directed() ? "directed" : "undirected") << "\">\n";
  for (NodeId u = 0; u < g.node_count(); ++u) {
    out << "    <node id=\"n" << u << "\">";
    if (g.has_labels())
      out << "<data key=\"label\">" << g.label(u) << "</data>";
    out << "</node>\n";
  }
  for (const Edge& e : g.edges())
    out << "    <edge source=\"n" << e.first << "\" target=\"n" << e.second
        << "\"/>\n";
  out << "  </graph>\n</graphml>\n";
}

}  // namespace bnt
