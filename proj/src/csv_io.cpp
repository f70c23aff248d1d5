#include "mht/csv_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "mht/errors.hpp"

namespace mht {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf);
}

namespace {

std::vector<size_t> stride_selection(size_t count, int stride) {
  std::vector<size_t> pick;
  for (size_t j = 0; j < count; j += static_cast<size_t>(stride)) pick.push_back(j);
  if (pick.empty() || pick.back() != count - 1) pick.push_back(count - 1);
  return pick;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s, const std::string& where) {
  try {
    size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError("malformed number '" + s + "' in " + where);
  }
}

}  // namespace

void write_trajectory_csv(const std::string& path, const Trajectory& tr, int stride) {
  if (stride < 1) throw ValidationError({"output stride must be >= 1"});
  std::ofstream out(path, std::ios::binary);  // '\n' endings on every platform
  if (!out) throw ParseError("cannot open '" + path + "' for writing");

  const bool flow = !tr.q.empty();
  const bool flow_full = flow && tr.q.size() == tr.times.size() &&
                         tr.p_star.size() == tr.times.size();
  out << "t,x,u,chi,S";
  if (flow_full) out << ",q,p_star";
  out << "\n";

  for (size_t j : stride_selection(tr.times.size(), stride)) {
    for (int i = 0; i < tr.grid.n_cells; ++i) {
      out << format_double(tr.times[j]) << ',' << format_double(tr.grid.center(i)) << ','
          << format_double(tr.u[j][i]) << ',' << format_double(tr.chi[j][i]) << ','
          << format_double(tr.S[j][i]);
      if (flow_full) {
        out << ',' << format_double(tr.q[j]) << ',' << format_double(tr.p_star[j][i]);
      }
      out << "\n";
    }
  }
  if (!out) throw ParseError("write to '" + path + "' failed");
}

TrajectoryTable read_trajectory_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open trajectory file '" + path + "'");

  std::string line;
  if (!std::getline(in, line)) throw ParseError("trajectory file '" + path + "' is empty");
  TrajectoryTable tb;
  if (line == "t,x,u,chi,S,q,p_star") {
    tb.has_flow = true;
  } else if (line != "t,x,u,chi,S") {
    throw ParseError("unexpected trajectory header '" + line + "'");
  }

  const size_t ncols = tb.has_flow ? 7 : 5;
  size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const std::string where = path + ":" + std::to_string(row);
    std::vector<std::string> cols = split(line, ',');
    if (cols.size() != ncols) throw ParseError("wrong column count in " + where);
    const double t = parse_double(cols[0], where);
    if (tb.times.empty() || t != tb.times.back()) {
      tb.times.push_back(t);
      tb.u.emplace_back();
      tb.chi.emplace_back();
      tb.S.emplace_back();
      if (tb.has_flow) {
        tb.q.push_back(parse_double(cols[5], where));
        tb.p_star.emplace_back();
      }
    }
    const double x = parse_double(cols[1], where);
    if (tb.times.size() == 1) {
      tb.xs.push_back(x);
    } else if (tb.u.back().size() >= tb.xs.size() ||
               x != tb.xs[tb.u.back().size()]) {
      throw ParseError("cell layout changes between knots in " + where);
    }
    tb.u.back().push_back(parse_double(cols[2], where));
    tb.chi.back().push_back(parse_double(cols[3], where));
    tb.S.back().push_back(parse_double(cols[4], where));
    if (tb.has_flow) tb.p_star.back().push_back(parse_double(cols[6], where));
  }
  for (size_t k = 0; k < tb.times.size(); ++k) {
    if (tb.u[k].size() != tb.xs.size()) {
      throw ParseError("knot " + std::to_string(k) + " in '" + path +
                       "' has an incomplete cell set");
    }
  }
  if (tb.times.empty()) throw ParseError("trajectory file '" + path + "' has no rows");
  return tb;
}

void write_report(const std::string& path,
                  const std::vector<std::pair<std::string, std::string>>& entries) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open '" + path + "' for writing");
  for (const auto& [key, value] : entries) out << key << ": " << value << "\n";
  if (!out) throw ParseError("write to '" + path + "' failed");
}

std::map<std::string, std::string> read_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open report file '" + path + "'");
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const size_t sep = line.find(": ");
    if (sep == std::string::npos) throw ParseError("malformed report line '" + line + "'");
    kv[line.substr(0, sep)] = line.substr(sep + 2);
  }
  return kv;
}

}  // namespace mht
