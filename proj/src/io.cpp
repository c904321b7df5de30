#include "oqrw/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>

namespace oqrw::io {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ParseError(where + ": " + what);
}

json parse_document(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& ex) {
    throw ParseError(std::string("malformed JSON at byte ") + std::to_string(ex.byte) + ": " + ex.what());
  }
}

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) fail(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(where, std::string("missing key \"") + key + "\"");
  return *it;
}

std::size_t read_size(const json& node, const std::string& where) {
  if (!node.is_number_integer() || node.get<long long>() < 0) fail(where, "expected a non-negative integer");
  return node.get<std::size_t>();
}

double read_double(const json& node, const std::string& where) {
  if (!node.is_number()) fail(where, "expected a number");
  return node.get<double>();
}

ComplexMatrix read_matrix(const json& node, std::size_t dim, const std::string& where) {
  if (!node.is_array() || node.size() != dim)
    fail(where, "expected " + std::to_string(dim) + " rows");
  const auto d = static_cast<Eigen::Index>(dim);
  ComplexMatrix m(d, d);
  for (std::size_t r = 0; r < dim; ++r) {
    const json& row = node[r];
    const std::string row_where = where + "[" + std::to_string(r) + "]";
    if (!row.is_array() || row.size() != dim) fail(row_where, "expected " + std::to_string(dim) + " entries");
    for (std::size_t c = 0; c < dim; ++c) {
      const json& entry = row[c];
      const std::string entry_where = row_where + "[" + std::to_string(c) + "]";
      if (!entry.is_array() || entry.size() != 2) fail(entry_where, "expected an [re, im] pair");
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          Complex(read_double(entry[0], entry_where), read_double(entry[1], entry_where));
    }
  }
  return m;
}

json write_matrix(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::size_t resolve_site(const json& node, const std::vector<std::string>& labels, const std::string& where) {
  if (!node.is_string()) fail(where, "site labels are strings");
  const auto label = node.get<std::string>();
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == label) return i;
  fail(where, "unknown site \"" + label + "\"");
}

/// Reads either form of a block file into one matrix per site.
std::pair<std::size_t, Blocks> read_blocks(std::string_view text, const std::vector<std::string>& labels) {
  const json doc = parse_document(text);
  const std::size_t h = read_size(require(doc, "h_dim", "document"), "h_dim");
  if (h == 0) fail("h_dim", "must be positive");
  const auto hi = static_cast<Eigen::Index>(h);
  Blocks blocks(labels.size(), ComplexMatrix::Zero(hi, hi));

  const bool has_blocks = doc.contains("blocks");
  const bool has_dense = doc.contains("dense");
  if (has_blocks == has_dense) fail("document", "exactly one of \"blocks\" and \"dense\" is required");

  if (has_dense) {
    const std::size_t full = h * labels.size();
    const ComplexMatrix m = read_matrix(doc["dense"], full, "dense");
    for (std::size_t i = 0; i < labels.size(); ++i) {
      for (std::size_t j = 0; j < labels.size(); ++j) {
        const auto block = m.block(static_cast<Eigen::Index>(i * h), static_cast<Eigen::Index>(j * h), hi, hi);
        if (i == j) {
          blocks[i] = block;
        } else if (block.cwiseAbs().maxCoeff() > kOffDiagonalTol) {
          fail("dense", "off-diagonal block (" + labels[i] + ", " + labels[j] +
                            ") is nonzero; only block-diagonal operators are supported");
        }
      }
    }
    return {h, std::move(blocks)};
  }

  const json& list = doc["blocks"];
  if (!list.is_array()) fail("blocks", "expected a list");
  std::vector<bool> seen(labels.size(), false);
  for (std::size_t k = 0; k < list.size(); ++k) {
    const std::string where = "blocks[" + std::to_string(k) + "]";
    const std::size_t site = resolve_site(require(list[k], "site", where), labels, where + ".site");
    if (seen[site]) fail(where, "site \"" + labels[site] + "\" listed twice");
    seen[site] = true;
    blocks[site] = read_matrix(require(list[k], "matrix", where), h, where + ".matrix");
  }
  return {h, std::move(blocks)};
}

std::string pretty(const json& doc) { return doc.dump(2) + "\n"; }

}  // namespace

TransitionFamily parse_walk(std::string_view text, const WalkOptions& opts) {
  const json doc = parse_document(text);
  const std::size_t h = read_size(require(doc, "h_dim", "document"), "h_dim");
  const json& sites_node = require(doc, "sites", "document");
  if (!sites_node.is_array()) fail("sites", "expected a list of labels");
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < sites_node.size(); ++i) {
    if (!sites_node[i].is_string()) fail("sites[" + std::to_string(i) + "]", "expected a string");
    labels.push_back(sites_node[i].get<std::string>());
  }

  ValidationMode mode = ValidationMode::strict;
  if (doc.contains("validation")) {
    const json& v = doc["validation"];
    if (v == "strict")
      mode = ValidationMode::strict;
    else if (v == "relaxed")
      mode = ValidationMode::relaxed;
    else
      fail("validation", "expected \"strict\" or \"relaxed\"");
  }
  if (opts.mode) mode = *opts.mode;

  const json& list = require(doc, "transitions", "document");
  if (!list.is_array()) fail("transitions", "expected a list");
  std::vector<TransitionEntry> entries;
  for (std::size_t k = 0; k < list.size(); ++k) {
    const std::string where = "transitions[" + std::to_string(k) + "]";
    const std::size_t from = resolve_site(require(list[k], "from", where), labels, where + ".from");
    const std::size_t to = resolve_site(require(list[k], "to", where), labels, where + ".to");
    entries.push_back(TransitionEntry{SiteIndex{from}, SiteIndex{to},
                                      read_matrix(require(list[k], "matrix", where), h, where + ".matrix")});
  }
  return TransitionFamily(h, std::move(labels), std::move(entries), mode, opts.kraus_tol);
}

std::string dump_walk(const TransitionFamily& family) {
  json doc;
  doc["h_dim"] = family.h_dim();
  doc["sites"] = family.site_labels();
  doc["validation"] = family.mode() == ValidationMode::strict ? "strict" : "relaxed";
  json list = json::array();
  for (const auto& t : family.entries())
    list.push_back({{"from", family.label(t.from)}, {"to", family.label(t.to)}, {"matrix", write_matrix(t.op)}});
  doc["transitions"] = std::move(list);
  return pretty(doc);
}

BlockState parse_state(std::string_view text, const std::vector<std::string>& labels, double trace_tol) {
  auto [h, blocks] = read_blocks(text, labels);
  return BlockState(h, std::move(blocks), trace_tol);
}

BlockObservable parse_observable(std::string_view text, const std::vector<std::string>& labels) {
  auto [h, blocks] = read_blocks(text, labels);
  return BlockObservable(h, std::move(blocks));
}

BlockProjection parse_projection(std::string_view text, const std::vector<std::string>& labels) {
  auto [h, blocks] = read_blocks(text, labels);
  return BlockProjection(h, std::move(blocks));
}

std::string dump_blocks(std::size_t h_dim, const Blocks& blocks, const std::vector<std::string>& labels) {
  if (blocks.size() != labels.size()) throw DimensionError("one label per block is required");
  json doc;
  doc["h_dim"] = h_dim;
  json list = json::array();
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (blocks[i].cwiseAbs().maxCoeff() == 0.0) continue;
    list.push_back({{"site", labels[i]}, {"matrix", write_matrix(blocks[i])}});
  }
  doc["blocks"] = std::move(list);
  return pretty(doc);
}

std::string dump_state(const BlockState& state, const std::vector<std::string>& labels) {
  return dump_blocks(state.h_dim(), state.blocks(), labels);
}

std::string dump_observable(const BlockObservable& obs, const std::vector<std::string>& labels) {
  return dump_blocks(obs.h_dim(), obs.blocks(), labels);
}

std::string dump_projection(const BlockProjection& proj, const std::vector<std::string>& labels) {
  return dump_observable(proj.observable(), labels);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::filesystem::path parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path);
    out << content;
    if (!out.flush()) throw Error("cannot write " + path);
  }
  std::filesystem::rename(tmp, path);
}

std::string format_number(double value) {
  std::ostringstream out;
  out << std::setprecision(17) << value;
  return out.str();
}

std::string distribution_csv(const std::vector<double>& distribution, const std::vector<std::string>& labels) {
  std::ostringstream out;
  out << "site,probability\n";
  for (std::size_t i = 0; i < distribution.size(); ++i) out << labels.at(i) << ',' << format_number(distribution[i]) << '\n';
  return out.str();
}

std::string evolution_csv(const std::vector<std::vector<double>>& rows, const std::vector<std::string>& labels) {
  std::ostringstream out;
  out << "step";
  for (const auto& l : labels) out << ',' << l;
  out << '\n';
  for (std::size_t n = 0; n < rows.size(); ++n) {
    out << n;
    for (double p : rows[n]) out << ',' << format_number(p);
    out << '\n';
  }
  return out.str();
}

std::string series_csv(const std::vector<double>& series) {
  std::ostringstream out;
  out << "n,value\n";
  for (std::size_t n = 0; n < series.size(); ++n) out << n << ',' << format_number(series[n]) << '\n';
  return out.str();
}

}  // namespace oqrw::io
