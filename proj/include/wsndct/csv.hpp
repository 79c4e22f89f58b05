#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "wsndct/clustering.hpp"
#include "wsndct/deployment.hpp"
#include "wsndct/routing.hpp"
#include "wsndct/transform.hpp"

namespace wsndct::csv {

// Shortest round-trip decimal form; locale-independent, so output is
// byte-stable across runs and machines.
inline std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << content;
  if (!out) throw IoError("write failed: " + path.string());
}

// node_id,x,y
inline std::string deployment_csv(const Deployment& deployment) {
  std::string out = "node_id,x,y\n";
  for (std::size_t id = 0; id < deployment.nodes.size(); ++id) {
    out += std::to_string(id);
    out += ',';
    out += format_double(deployment.nodes[id].x);
    out += ',';
    out += format_double(deployment.nodes[id].y);
    out += '\n';
  }
  return out;
}

// Inverse of deployment_csv; geometry, BS and seed come from the sidecar
// manifest record. Node ids must be the consecutive row indices.
inline Deployment deployment_from_csv(std::string_view text, const AreaGeometry& geometry,
                                      Position bs, std::uint64_t seed) {
  Deployment dep{geometry, {}, bs, seed};
  std::size_t pos = 0, line_no = 0;
  while (pos < text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() : eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line != "node_id,x,y")
        throw InvalidDataError("deployment csv: expected header `node_id,x,y`");
      continue;
    }
    const std::size_t c1 = line.find(',');
    const std::size_t c2 = c1 == std::string_view::npos ? std::string_view::npos
                                                        : line.find(',', c1 + 1);
    if (c1 == std::string_view::npos || c2 == std::string_view::npos)
      throw InvalidDataError("deployment csv: malformed row at line " + std::to_string(line_no));
    long long id = 0;
    double x = 0, y = 0;
    auto ok = std::from_chars(line.data(), line.data() + c1, id);
    auto okx = std::from_chars(line.data() + c1 + 1, line.data() + c2, x);
    auto oky = std::from_chars(line.data() + c2 + 1, line.data() + line.size(), y);
    if (ok.ec != std::errc() || okx.ec != std::errc() || oky.ec != std::errc())
      throw InvalidDataError("deployment csv: non-numeric field at line " +
                             std::to_string(line_no));
    if (id != static_cast<long long>(dep.nodes.size()))
      throw InvalidDataError("deployment csv: node ids must be consecutive from 0 (line " +
                             std::to_string(line_no) + ")");
    dep.nodes.push_back(Position{x, y});
  }
  if (dep.nodes.empty()) throw InvalidDataError("deployment csv: no node rows");
  return dep;
}

// node_id,cluster_index,is_head
inline std::string cluster_csv(const ClusterSet& clusters) {
  std::vector<std::pair<std::size_t, bool>> row_of_node;
  std::size_t n = 0;
  for (const auto& c : clusters.clusters) n += c.members.size();
  row_of_node.resize(n);
  for (std::size_t ci = 0; ci < clusters.clusters.size(); ++ci)
    for (const int member : clusters.clusters[ci].members)
      row_of_node[member] = {ci, member == clusters.clusters[ci].head};
  std::string out = "node_id,cluster_index,is_head\n";
  for (std::size_t id = 0; id < n; ++id) {
    out += std::to_string(id);
    out += ',';
    out += std::to_string(row_of_node[id].first);
    out += ',';
    out += row_of_node[id].second ? '1' : '0';
    out += '\n';
  }
  return out;
}

// cluster_index,n,coeff_index,coeff_value
inline std::string payload_csv(std::span<const CompressedPayload> payloads) {
  std::string out = "cluster_index,n,coeff_index,coeff_value\n";
  for (std::size_t ci = 0; ci < payloads.size(); ++ci) {
    for (const auto& kc : payloads[ci].kept) {
      out += std::to_string(ci);
      out += ',';
      out += std::to_string(payloads[ci].n);
      out += ',';
      out += std::to_string(kc.index);
      out += ',';
      out += format_double(kc.value);
      out += '\n';
    }
  }
  return out;
}

// cluster_index,sorted_pos,node_id
inline std::string permutation_csv(std::span<const CompressedPayload> payloads) {
  std::string out = "cluster_index,sorted_pos,node_id\n";
  for (std::size_t ci = 0; ci < payloads.size(); ++ci) {
    for (std::size_t pos = 0; pos < payloads[ci].permutation.size(); ++pos) {
      out += std::to_string(ci);
      out += ',';
      out += std::to_string(pos);
      out += ',';
      out += std::to_string(payloads[ci].permutation[pos]);
      out += '\n';
    }
  }
  return out;
}

// ch_id,parent_id,hops,edge_length — one row per CH; unreachable heads get
// empty parent/hops/edge fields.
inline std::string tree_csv(const RoutingTree& tree) {
  std::string out = "ch_id,parent_id,hops,edge_length\n";
  std::size_t ei = 0, ui = 0;
  while (ei < tree.entries.size() || ui < tree.unreachable.size()) {
    const bool take_entry =
        ui >= tree.unreachable.size() ||
        (ei < tree.entries.size() && tree.entries[ei].ch_id < tree.unreachable[ui]);
    if (take_entry) {
      const auto& e = tree.entries[ei++];
      out += std::to_string(e.ch_id);
      out += ',';
      out += std::to_string(e.parent_id);
      out += ',';
      out += std::to_string(e.hops);
      out += ',';
      out += format_double(e.edge_length);
      out += '\n';
    } else {
      out += std::to_string(tree.unreachable[ui++]);
      out += ",,,\n";
    }
  }
  return out;
}

}  // namespace wsndct::csv
