#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "auase/error.hpp"
#include "auase/model.hpp"
#include "auase_builtin_configs.hpp"

namespace auase {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

std::string at_line(std::size_t line) { return "line " + std::to_string(line) + ": "; }

double parse_double(std::string_view token, std::size_t line) {
  double value = 0.0;
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, value);
  require(ec == std::errc() && ptr == end,
          at_line(line) + "expected a number, got '" + std::string(token) + "'");
  return value;
}

// Accepts plain numbers and fractions "a/b".
double parse_real(std::string_view token, std::size_t line) {
  const auto slash = token.find('/');
  if (slash == std::string_view::npos) return parse_double(token, line);
  const double den = parse_double(token.substr(slash + 1), line);
  require(den != 0.0, at_line(line) + "zero denominator");
  return parse_double(token.substr(0, slash), line) / den;
}

std::size_t parse_count(std::string_view token, std::size_t line) {
  std::size_t value = 0;
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, value);
  require(ec == std::errc() && ptr == end,
          at_line(line) + "expected a count, got '" + std::string(token) + "'");
  return value;
}

std::vector<double> parse_row(std::string_view text, std::size_t line) {
  std::vector<double> row;
  for (auto token : split_ws(text)) {
    const auto star = token.find('*');
    if (star == std::string_view::npos) {
      row.push_back(parse_real(token, line));
    } else {
      const double v = parse_real(token.substr(0, star), line);
      row.insert(row.end(), parse_count(token.substr(star + 1), line), v);
    }
  }
  return row;
}

DenseMatrix rows_to_matrix(const std::vector<std::vector<double>>& rows, const char* name) {
  require(!rows.empty(), std::string("model config: matrix ") + name + " has no rows");
  const std::size_t cols = rows.front().size();
  std::vector<double> data;
  for (const auto& r : rows) {
    require(r.size() == cols, std::string("model config: ragged rows in ") + name);
    data.insert(data.end(), r.begin(), r.end());
  }
  return DenseMatrix(rows.size(), cols, std::move(data));
}

std::string shortest(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void write_row(std::ostream& out, std::span<const double> row) {
  out << ' ';
  std::size_t i = 0;
  while (i < row.size()) {
    std::size_t j = i + 1;
    while (j < row.size() && row[j] == row[i]) ++j;
    out << ' ' << shortest(row[i]);
    if (j - i > 1) out << '*' << (j - i);
    i = j;
  }
  out << '\n';
}

}  // namespace

ModelSpec parse_model_spec(std::istream& in) {
  ModelSpec spec;
  bool have_b = false;
  bool have_d = false;
  std::vector<std::vector<double>> b_rows;
  std::vector<std::vector<double>> d_rows;
  std::vector<std::vector<double>>* matrix = nullptr;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view text(raw);
    if (const auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
    text = trim(text);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) {
      require(matrix != nullptr, at_line(line) + "matrix row outside of B or D");
      matrix->push_back(parse_row(text, line));
      continue;
    }
    matrix = nullptr;
    const auto key = trim(text.substr(0, eq));
    const auto value = trim(text.substr(eq + 1));
    if (key == "B" || key == "D") {
      auto& target = key == "B" ? b_rows : d_rows;
      (key == "B" ? have_b : have_d) = true;
      target.clear();
      if (!value.empty()) target.push_back(parse_row(value, line));
      matrix = &target;
    } else if (key == "sigma") {
      spec.sigma = parse_real(value, line);
    } else if (key == "rho") {
      spec.rho = parse_real(value, line);
    } else if (key == "alpha") {
      spec.alpha = parse_real(value, line);
    } else if (key == "trajectory") {
      const auto colon = value.find(':');
      require(colon != std::string_view::npos,
              at_line(line) + "trajectory needs 'probability : states'");
      Trajectory traj;
      traj.probability = parse_real(trim(value.substr(0, colon)), line);
      for (auto token : split_ws(value.substr(colon + 1))) {
        const std::size_t s = parse_count(token, line);
        traj.states.push_back(static_cast<int>(s));
      }
      spec.trajectories.push_back(std::move(traj));
    } else {
      throw ValidationError(at_line(line) + "unknown key '" + std::string(key) + "'");
    }
  }
  require(have_b && have_d, "model config: both B and D are required");
  spec.B = rows_to_matrix(b_rows, "B");
  spec.D = rows_to_matrix(d_rows, "D");
  spec.validate();
  return spec;
}

ModelSpec parse_model_spec(const std::string& text) {
  std::istringstream in(text);
  return parse_model_spec(in);
}

ModelSpec load_model_spec(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "cannot open model config '" + path + "'");
  return parse_model_spec(in);
}

std::string format_model_spec(const ModelSpec& spec) {
  std::ostringstream out;
  out << "sigma = " << shortest(spec.sigma) << '\n';
  out << "rho = " << shortest(spec.rho) << '\n';
  out << "alpha = " << shortest(spec.alpha) << '\n';
  out << "B =\n";
  for (std::size_t i = 0; i < spec.B.rows(); ++i) write_row(out, spec.B.row(i));
  out << "D =\n";
  for (std::size_t i = 0; i < spec.D.rows(); ++i) write_row(out, spec.D.row(i));
  for (const auto& traj : spec.trajectories) {
    out << "trajectory = " << shortest(traj.probability) << " :";
    for (int s : traj.states) out << ' ' << s;
    out << '\n';
  }
  return out.str();
}

ModelSpec synthetic_model_spec() { return parse_model_spec(std::string(builtin::kSyntheticConfig)); }

ModelSpec rate_check_model_spec() { return parse_model_spec(std::string(builtin::kRateCheckConfig)); }

void write_assignment_csv(std::ostream& out, const LatentAssignment& z) {
  out << "node,trajectory";
  for (std::size_t t = 0; t < z.T; ++t) out << ",z_" << t;
  out << '\n';
  for (std::size_t i = 0; i < z.n; ++i) {
    out << i << ',' << z.trajectory[i];
    for (std::size_t t = 0; t < z.T; ++t) out << ',' << z.at(i, t);
    out << '\n';
  }
}

LatentAssignment read_assignment_csv(std::istream& in) {
  std::string raw;
  require(static_cast<bool>(std::getline(in, raw)), "assignment CSV: missing header");
  std::size_t columns = 1;
  for (char c : raw) columns += c == ',' ? 1 : 0;
  require(columns >= 3 && trim(raw).starts_with("node,trajectory"),
          "assignment CSV: header must start with node,trajectory");
  LatentAssignment z;
  z.T = columns - 2;
  std::size_t line = 1;
  while (std::getline(in, raw)) {
    ++line;
    const auto text = trim(raw);
    if (text.empty()) continue;
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
      const auto comma = text.find(',', start);
      fields.push_back(trim(text.substr(start, comma - start)));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    require(fields.size() == columns, at_line(line) + "expected " + std::to_string(columns) +
                                          " fields, got " + std::to_string(fields.size()));
    require(parse_count(fields[0], line) == z.n, at_line(line) + "node ids must be 0, 1, 2, ...");
    z.trajectory.push_back(parse_count(fields[1], line));
    for (std::size_t t = 0; t < z.T; ++t)
      z.states.push_back(static_cast<int>(parse_count(fields[t + 2], line)));
    ++z.n;
  }
  return z;
}

}  // namespace auase
