#include "ccd/io/dataset.hpp"

#include <array>
#include <cerrno>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>
#include <openssl/evp.h>
#include <unistd.h>

#include "ccd/error.hpp"
#include "ccd/text.hpp"

namespace ccd::io {

namespace {

std::string escape_meta(std::string_view v) {
  std::string out;
  for (char c : v) {
    if (c == '\n') out += "\\n";
    else if (c == '\\') out += "\\\\";
    else out += c;
  }
  return out;
}

std::string unescape_meta(std::string_view v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == '\\' && i + 1 < v.size()) {
      out += v[i + 1] == 'n' ? '\n' : v[i + 1];
      ++i;
    } else {
      out += v[i];
    }
  }
  return out;
}

nlohmann::ordered_json number_json(double v) {
  if (!std::isfinite(v)) return format_number(v);
  return v;
}

}  // namespace

void Dataset::set(const std::string& key, const std::string& value) {
  for (auto& [k, v] : meta) {
    if (k == key) {
      v = value;
      return;
    }
  }
  meta.emplace_back(key, value);
}

std::string Dataset::get(std::string_view key) const {
  for (const auto& [k, v] : meta)
    if (k == key) return v;
  return {};
}

std::string git_blob_hash(std::string_view text) {
  const std::string header = "blob " + std::to_string(text.size()) + std::string(1, '\0');
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (ctx == nullptr) throw Error("sha1: cannot allocate digest context");
  const bool ok = EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr) == 1 &&
                  EVP_DigestUpdate(ctx, header.data(), header.size()) == 1 &&
                  EVP_DigestUpdate(ctx, text.data(), text.size()) == 1 &&
                  EVP_DigestFinal_ex(ctx, digest.data(), &len) == 1;
  EVP_MD_CTX_free(ctx);
  if (!ok) throw Error("sha1: digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

Dataset make_dataset(std::string_view command, const RunConfig& cfg, const std::string& timestamp) {
  Dataset ds;
  // Worker count and destination do not affect the data.
  RunConfig recorded = cfg;
  recorded.threads = 0;
  recorded.output.clear();
  const std::string text = emit_config(recorded);
  ds.set("tool", std::string(kToolName));
  ds.set("version", std::string(kToolVersion));
  ds.set("command", std::string(command));
  if (!timestamp.empty()) ds.set("timestamp", timestamp);
  ds.set("config_hash", git_blob_hash(text));
  ds.set("config", text);
  ds.set("spin_up", "|1>, initial state |0>");
  return ds;
}

void add_grid(Dataset& ds, const Axis& x, const Axis& y, const Eigen::MatrixXd& values,
              const std::string& value_name) {
  ds.axes = {x, y};
  ds.columns = {x.name, y.name, value_name};
  ds.rows.clear();
  ds.rows.reserve(x.values.size() * y.values.size());
  for (std::size_t i = 0; i < x.values.size(); ++i)
    for (std::size_t j = 0; j < y.values.size(); ++j)
      ds.rows.push_back({x.values[i], y.values[j], values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))});
}

std::string emit_csv(const Dataset& ds) {
  std::string out;
  for (const auto& [k, v] : ds.meta) out += "#" + k + "=" + escape_meta(v) + "\n";
  for (const auto& a : ds.axes) out += "#axis." + a.name + "=" + a.units + "\n";
  for (std::size_t c = 0; c < ds.columns.size(); ++c) out += (c ? "," : "") + ds.columns[c];
  out += "\n";
  for (const auto& row : ds.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out += (c ? "," : "") + format_number(row[c]);
    out += "\n";
  }
  return out;
}

std::string emit_json(const Dataset& ds) {
  nlohmann::ordered_json j;
  j["meta"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : ds.meta) j["meta"][k] = v;
  j["axes"] = nlohmann::ordered_json::array();
  for (const auto& a : ds.axes) {
    nlohmann::ordered_json axis;
    axis["name"] = a.name;
    axis["units"] = a.units;
    axis["values"] = nlohmann::ordered_json::array();
    for (double v : a.values) axis["values"].push_back(number_json(v));
    j["axes"].push_back(axis);
  }
  j["values"]["columns"] = ds.columns;
  j["values"]["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : ds.rows) {
    nlohmann::ordered_json r = nlohmann::ordered_json::array();
    for (double v : row) r.push_back(number_json(v));
    j["values"]["rows"].push_back(r);
  }
  return j.dump(1) + "\n";
}

std::string emit_dataset(const Dataset& ds, Format format) {
  return format == Format::Csv ? emit_csv(ds) : emit_json(ds);
}

Dataset parse_csv(std::string_view text) {
  Dataset ds;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    const std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    if (line.empty()) continue;
    if (line.front() == '#') {
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) throw ConfigError(line_no, 1, "metadata line without '='");
      const std::string key(line.substr(1, eq - 1));
      if (key.rfind("axis.", 0) == 0) continue;
      ds.meta.emplace_back(key, unescape_meta(line.substr(eq + 1)));
      continue;
    }
    std::vector<std::string> cells;
    std::size_t p = 0;
    while (true) {
      const auto comma = line.find(',', p);
      cells.emplace_back(line.substr(p, comma == std::string_view::npos ? std::string_view::npos : comma - p));
      if (comma == std::string_view::npos) break;
      p = comma + 1;
    }
    if (!header_seen) {
      ds.columns = cells;
      header_seen = true;
      continue;
    }
    if (cells.size() != ds.columns.size()) throw ConfigError(line_no, 1, "row width differs from the header");
    std::vector<double> row;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (cells[c] == "nan") row.push_back(std::numeric_limits<double>::quiet_NaN());
      else if (cells[c] == "inf") row.push_back(std::numeric_limits<double>::infinity());
      else if (cells[c] == "-inf") row.push_back(-std::numeric_limits<double>::infinity());
      else row.push_back(parse_number(cells[c], line_no, c + 1));
    }
    ds.rows.push_back(std::move(row));
  }
  return ds;
}

void write_file_atomic(const std::string& path, std::string_view bytes) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path tmp = target.parent_path() / ("." + target.filename().string() + ".tmp." + std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(path, std::string("cannot open for writing: ") + std::strerror(errno));
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw IoError(path, "write failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw IoError(path, "rename failed: " + ec.message());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, std::string("cannot open for reading: ") + std::strerror(errno));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace ccd::io
