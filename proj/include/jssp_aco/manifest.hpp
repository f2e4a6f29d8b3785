#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "instance.hpp"

namespace jssp {

struct ManifestEntry {
  std::string name;
  std::size_t n_jobs{0};
  std::size_t n_machines{0};
  Time known_optimum{0};
};

// Known-optimum table read from a CSV with header
// "name,n_jobs,n_machines,known_optimum".
class Manifest {
 public:
  Manifest() = default;

  static Manifest parse(const std::string& csv) {
    Manifest m;
    std::istringstream in(csv);
    std::string line;
    std::size_t line_no = 0;
    bool header = true;
    while (std::getline(in, line)) {
      ++line_no;
      auto t = detail::trim(line);
      if (t.empty() || t.front() == '#') continue;
      if (header) {
        header = false;
        if (t != "name,n_jobs,n_machines,known_optimum")
          throw ParseError(line_no, "unexpected manifest header '" + std::string(t) + "'");
        continue;
      }
      std::vector<std::string> cells;
      std::stringstream row{std::string(t)};
      std::string cell;
      while (std::getline(row, cell, ',')) cells.emplace_back(detail::trim(cell));
      if (cells.size() != 4) throw ParseError(line_no, "expected 4 columns");
      try {
        ManifestEntry e{cells[0], std::stoul(cells[1]), std::stoul(cells[2]), std::stoll(cells[3])};
        m.entries_[e.name] = e;
      } catch (const std::logic_error&) {
        throw ParseError(line_no, "non-numeric manifest field");
      }
    }
    return m;
  }

  static Manifest load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open manifest " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
      return parse(buf.str());
    } catch (const ParseError& e) {
      throw ParseError(e.line(), e.message(), path.string());
    }
  }

  std::optional<ManifestEntry> find(const std::string& name) const {
    auto it = entries_.find(name);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  std::optional<Time> optimum(const std::string& name) const {
    auto e = find(name);
    return e ? std::optional<Time>(e->known_optimum) : std::nullopt;
  }

  std::size_t size() const noexcept { return entries_.size(); }

 private:
  std::map<std::string, ManifestEntry> entries_;
};

}  // namespace jssp
