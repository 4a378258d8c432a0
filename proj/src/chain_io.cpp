#include "cameo/chain_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string_view>
#include <vector>

#include "cameo/error.hpp"

namespace cameo {
namespace {

namespace fs = std::filesystem;

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path.string());
  return out;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_real(std::string_view field, long line, const char* what) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) {
    throw ParseError("line " + std::to_string(line) + ": bad " + what + " '" + std::string(field) + "'", line);
  }
  return v;
}

long parse_int(std::string_view field, long line, const char* what) {
  long v = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) {
    throw ParseError("line " + std::to_string(line) + ": bad " + what + " '" + std::string(field) + "'", line);
  }
  return v;
}

constexpr std::size_t kFixedColumns = 6;

}  // namespace

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void persist_chain(std::span<const ChainRecord> chain, const fs::path& path) {
  std::ofstream out = open_out(path);
  const std::size_t dim = chain.empty() ? 0 : chain.front().theta.size();
  out << "k,accepted,log_u_current,log_u_proposal,mean_return,intrinsic_loss";
  for (std::size_t j = 0; j < dim; ++j) out << ",theta_" << j;
  out << '\n';
  for (const ChainRecord& r : chain) {
    if (r.theta.size() != dim) throw ShapeError("chain records have differing theta lengths");
    out << r.k << ',' << (r.accepted ? 1 : 0) << ',' << format_real(r.log_u_current) << ','
        << format_real(r.log_u_proposal) << ',' << format_real(r.mean_return) << ','
        << format_real(r.intrinsic_loss);
    for (double v : r.theta) out << ',' << format_real(v);
    out << '\n';
  }
  if (!out) throw InputError("failed writing " + path.string());
}

Chain load_chain(const fs::path& path) {
  fs::path file = path;
  if (fs::is_directory(file)) file /= "chain.csv";
  if (!fs::exists(file)) throw NotFoundError("no chain file at " + file.string());
  std::ifstream in(file, std::ios::binary);
  if (!in) throw NotFoundError("cannot open " + file.string());

  std::string line;
  long line_no = 1;
  if (!std::getline(in, line)) throw ParseError("line 1: missing header", 1);
  const auto header = split(line, ',');
  static const char* kExpected[kFixedColumns] = {"k", "accepted", "log_u_current", "log_u_proposal",
                                                 "mean_return", "intrinsic_loss"};
  if (header.size() < kFixedColumns) throw ParseError("line 1: header has too few columns", 1);
  for (std::size_t i = 0; i < kFixedColumns; ++i) {
    if (header[i] != kExpected[i]) throw ParseError("line 1: unexpected column '" + std::string(header[i]) + "'", 1);
  }
  const std::size_t dim = header.size() - kFixedColumns;
  for (std::size_t j = 0; j < dim; ++j) {
    if (header[kFixedColumns + j] != "theta_" + std::to_string(j)) {
      throw ParseError("line 1: unexpected column '" + std::string(header[kFixedColumns + j]) + "'", 1);
    }
  }

  Chain chain;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != header.size()) {
      throw ParseError("line " + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                           " fields, found " + std::to_string(f.size()),
                       line_no);
    }
    ChainRecord r;
    r.k = static_cast<int>(parse_int(f[0], line_no, "k"));
    const long acc = parse_int(f[1], line_no, "accepted flag");
    if (acc != 0 && acc != 1) throw ParseError("line " + std::to_string(line_no) + ": accepted must be 0 or 1", line_no);
    r.accepted = acc == 1;
    r.log_u_current = parse_real(f[2], line_no, "log_u_current");
    r.log_u_proposal = parse_real(f[3], line_no, "log_u_proposal");
    r.mean_return = parse_real(f[4], line_no, "mean_return");
    r.intrinsic_loss = parse_real(f[5], line_no, "intrinsic_loss");
    std::vector<double> theta(dim);
    for (std::size_t j = 0; j < dim; ++j) theta[j] = parse_real(f[kFixedColumns + j], line_no, "theta");
    r.theta = ParamVector(std::move(theta));
    chain.push_back(std::move(r));
  }
  return chain;
}

void write_similarity_csv(const SimilarityMatrix& m, const fs::path& path) {
  std::ofstream out = open_out(path);
  out << "index";
  for (std::size_t j = 0; j < m.n; ++j) out << ',' << j;
  out << '\n';
  for (std::size_t i = 0; i < m.n; ++i) {
    out << i;
    for (std::size_t j = 0; j < m.n; ++j) out << ',' << format_real(m.at(i, j));
    out << '\n';
  }
}

void write_visitation_csv(const VisitationGrid& g, const fs::path& path) {
  std::ofstream out = open_out(path);
  out << "# env=" << g.env_name << '\n';
  for (int c = 0; c < g.cols; ++c) out << (c ? "," : "") << 'c' << c;
  out << '\n';
  for (int r = 0; r < g.rows; ++r) {
    for (int c = 0; c < g.cols; ++c) out << (c ? "," : "") << format_real(g.at(r, c));
    out << '\n';
  }
}

void write_summary_csv(const SummaryRow& row, const fs::path& path) {
  std::ofstream out = open_out(path);
  out << "acceptance_rate,best_mean_return,retained_unique,K,N,seed\n"
      << format_real(row.acceptance_rate) << ',' << format_real(row.best_mean_return) << ','
      << row.retained_unique << ',' << row.iterations << ',' << row.episodes << ',' << row.seed << '\n';
}

void write_traces_csv(const ChainSummary& s, std::span<const ChainRecord> chain, const fs::path& path) {
  std::ofstream out = open_out(path);
  out << "k,accepted,retained_count,mean_return,intrinsic_loss\n";
  for (std::size_t i = 0; i < chain.size(); ++i) {
    out << chain[i].k << ',' << (chain[i].accepted ? 1 : 0) << ',' << s.retained_count_trace[i] << ','
        << format_real(s.mean_return_trace[i]) << ',' << format_real(s.intrinsic_loss_trace[i]) << '\n';
  }
}

}  // namespace cameo
