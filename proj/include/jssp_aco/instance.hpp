#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace jssp {

using Time = std::int64_t;

struct Operation {
  std::size_t machine{0};
  Time duration{0};

  friend bool operator==(const Operation&, const Operation&) = default;
};

// Identity of a vertex in the search graph. `flat` is the row-major index
// over all operations of the instance.
struct OpId {
  std::size_t job{0};
  std::size_t step{0};
  std::size_t flat{0};

  friend bool operator==(const OpId&, const OpId&) = default;
};

// Thrown for malformed instance text. `line()` is 1-based; 0 when the
// error is not tied to a single line (e.g. missing job rows at EOF).
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& message, const std::string& source = {})
      : std::runtime_error((source.empty() ? "" : source + ": ") +
                           (line == 0 ? message : "line " + std::to_string(line) + ": " + message)),
        line_(line),
        message_(message) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::size_t line_;
  std::string message_;
};

class Instance {
 public:
  Instance() = default;

  Instance(std::string name, std::size_t n_machines, std::vector<std::vector<Operation>> jobs)
      : name_(std::move(name)), n_machines_(n_machines), jobs_(std::move(jobs)) {
    offsets_.resize(jobs_.size() + 1, 0);
    for (std::size_t j = 0; j < jobs_.size(); ++j) {
      for (const auto& op : jobs_[j]) {
        if (op.machine >= n_machines_)
          throw std::invalid_argument("machine index " + std::to_string(op.machine) +
                                      " >= n_machines " + std::to_string(n_machines_));
        if (op.duration < 0) throw std::invalid_argument("negative duration");
      }
      offsets_[j + 1] = offsets_[j] + jobs_[j].size();
    }
  }

  const std::string& name() const noexcept { return name_; }
  std::size_t n_jobs() const noexcept { return jobs_.size(); }
  std::size_t n_machines() const noexcept { return n_machines_; }
  const std::vector<std::vector<Operation>>& jobs() const noexcept { return jobs_; }
  const std::vector<Operation>& job(std::size_t j) const { return jobs_.at(j); }

  std::size_t total_ops() const noexcept { return offsets_.empty() ? 0 : offsets_.back(); }

  OpId op_id(std::size_t job, std::size_t step) const noexcept {
    return OpId{job, step, offsets_[job] + step};
  }

  OpId op_id(std::size_t flat) const {
    // offsets_ is sorted; find the job whose range contains flat
    auto it = std::upper_bound(offsets_.begin(), offsets_.end(), flat);
    std::size_t job = static_cast<std::size_t>(it - offsets_.begin()) - 1;
    return OpId{job, flat - offsets_[job], flat};
  }

  const Operation& operation(const OpId& id) const { return jobs_[id.job][id.step]; }

  friend bool operator==(const Instance& a, const Instance& b) {
    return a.name_ == b.name_ && a.n_machines_ == b.n_machines_ && a.jobs_ == b.jobs_;
  }

 private:
  std::string name_;
  std::size_t n_machines_{0};
  std::vector<std::vector<Operation>> jobs_;
  std::vector<std::size_t> offsets_{0};
};

inline std::size_t total_ops(const Instance& inst) noexcept { return inst.total_ops(); }

namespace detail {

inline std::string_view trim(std::string_view s) {
  const char* ws = " \t\r\n\f\v";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

// Parses whitespace-separated integers; throws ParseError on any non-integer token.
inline std::vector<long long> integers(std::string_view line, std::size_t line_no) {
  std::vector<long long> out;
  std::istringstream in{std::string(line)};
  std::string tok;
  while (in >> tok) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size()) throw ParseError(line_no, "expected integer, got '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

}  // namespace detail

/// Parses the OR-Library job-shop format: optional '#' comment lines, a
/// "n_jobs n_machines" header, then one line per job holding n_machines
/// (machine, duration) pairs with 0-indexed machines.
inline Instance parse_instance(std::string_view text, std::string name = {}) {
  std::size_t line_no = 0;
  std::size_t n_jobs = 0, n_machines = 0;
  bool have_header = false;
  std::vector<std::vector<Operation>> jobs;

  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    auto raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    auto line = detail::trim(raw);
    if (line.empty() || line.front() == '#') continue;

    auto values = detail::integers(line, line_no);
    if (!have_header) {
      if (values.size() != 2 || values[0] < 0 || values[1] <= 0)
        throw ParseError(line_no, "malformed header, expected 'n_jobs n_machines'");
      n_jobs = static_cast<std::size_t>(values[0]);
      n_machines = static_cast<std::size_t>(values[1]);
      have_header = true;
      continue;
    }
    if (jobs.size() == n_jobs) throw ParseError(line_no, "unexpected data after the last job line");
    if (values.size() != 2 * n_machines)
      throw ParseError(line_no, "expected " + std::to_string(n_machines) + " (machine, duration) pairs, got " +
                                    std::to_string(values.size()) + " integers");

    std::vector<Operation> row;
    row.reserve(n_machines);
    for (std::size_t k = 0; k < values.size(); k += 2) {
      if (values[k] < 0 || static_cast<std::size_t>(values[k]) >= n_machines)
        throw ParseError(line_no, "machine index " + std::to_string(values[k]) + " out of range [0, " +
                                      std::to_string(n_machines) + ")");
      if (values[k + 1] < 0) throw ParseError(line_no, "negative duration " + std::to_string(values[k + 1]));
      row.push_back(Operation{static_cast<std::size_t>(values[k]), static_cast<Time>(values[k + 1])});
    }
    jobs.push_back(std::move(row));
  }

  if (!have_header) throw ParseError(0, "missing header line");
  if (jobs.size() != n_jobs)
    throw ParseError(0, "expected " + std::to_string(n_jobs) + " job lines, found " + std::to_string(jobs.size()));
  return Instance(std::move(name), n_machines, std::move(jobs));
}

// Writes the instance back in the format parse_instance reads.
inline std::string serialize_instance(const Instance& inst) {
  std::ostringstream out;
  if (!inst.name().empty()) out << "# " << inst.name() << '\n';
  out << inst.n_jobs() << ' ' << inst.n_machines() << '\n';
  for (const auto& job : inst.jobs()) {
    for (std::size_t k = 0; k < job.size(); ++k) {
      if (k) out << ' ';
      out << job[k].machine << ' ' << job[k].duration;
    }
    out << '\n';
  }
  return out.str();
}

inline Instance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open instance file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_instance(buf.str(), path.stem().string());
  } catch (const ParseError& e) {
    throw ParseError(e.line(), e.message(), path.string());
  }
}

}  // namespace jssp
