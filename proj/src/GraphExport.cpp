#include "mrnet/GraphExport.hpp"

#include <cstdio>
#include <sstream>

namespace mrnet {

namespace {

std::string quoteDot(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string escapeXml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string shortNumber(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string fullNumber(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string toDot(const CausalGraph& g) {
  std::ostringstream out;
  out << "digraph causal_network {\n";
  for (const auto& n : g.nodes) out << "  " << quoteDot(n) << ";\n";
  for (const auto& e : g.edges) {
    out << "  " << quoteDot(e.a) << " -> " << quoteDot(e.b);
    std::vector<std::string> attrs;
    if (e.status == EdgeStatus::Undirected) attrs.push_back("dir=none");
    if (e.status == EdgeStatus::Conflicted) {
      attrs.push_back("dir=none");
      attrs.push_back("style=dashed");
    }
    if (e.coefficient) attrs.push_back("label=" + quoteDot(shortNumber(*e.coefficient)));
    if (!attrs.empty()) {
      out << " [";
      for (std::size_t i = 0; i < attrs.size(); ++i) out << (i ? ", " : "") << attrs[i];
      out << "]";
    }
    out << ";\n";
  }
  out << "}\n";
  return out.str();
}

std::string toGraphml(const CausalGraph& g) {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
      << "  <key id=\"status\" for=\"edge\" attr.name=\"status\" attr.type=\"string\"/>\n"
      << "  <key id=\"coefficient\" for=\"edge\" attr.name=\"coefficient\" attr.type=\"double\"/>\n"
      << "  <key id=\"style\" for=\"edge\" attr.name=\"style\" attr.type=\"string\"/>\n"
      << "  <graph id=\"causal_network\" edgedefault=\"directed\">\n";
  for (const auto& n : g.nodes) out << "    <node id=\"" << escapeXml(n) << "\"/>\n";
  int k = 0;
  for (const auto& e : g.edges) {
    out << "    <edge id=\"e" << k++ << "\" source=\"" << escapeXml(e.a) << "\" target=\""
        << escapeXml(e.b) << "\" directed=\"" << (e.status == EdgeStatus::Directed ? "true" : "false")
        << "\">\n";
    out << "      <data key=\"status\">" << edgeStatusName(e.status) << "</data>\n";
    if (e.status == EdgeStatus::Conflicted) out << "      <data key=\"style\">dashed</data>\n";
    if (e.coefficient)
      out << "      <data key=\"coefficient\">" << fullNumber(*e.coefficient) << "</data>\n";
    out << "    </edge>\n";
  }
  out << "  </graph>\n</graphml>\n";
  return out.str();
}

}  // namespace mrnet
