#include "dqg/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <tuple>

namespace dqg {

namespace {

// Non-empty lines split into whitespace tokens, comments removed.
class LineReader {
 public:
  explicit LineReader(std::string_view text) {
    std::size_t pos = 0;
    int number = 0;
    while (pos <= text.size()) {
      const std::size_t end = std::min(text.find('\n', pos), text.size());
      std::string_view line = text.substr(pos, end - pos);
      ++number;
      if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
      std::vector<std::string_view> toks;
      std::size_t i = 0;
      while (i < line.size()) {
        while (i < line.size() && is_space(line[i])) ++i;
        std::size_t j = i;
        while (j < line.size() && !is_space(line[j])) ++j;
        if (j > i) toks.push_back(line.substr(i, j - i));
        i = j;
      }
      if (!toks.empty()) lines_.push_back({number, std::move(toks), line});
      if (end == text.size()) break;
      pos = end + 1;
    }
  }

  bool done() const { return next_ >= lines_.size(); }
  const std::vector<std::string_view>& peek() const { return current().tokens; }
  int line_number() const { return done() ? last_line() : current().number; }

  std::vector<std::string_view> take(std::size_t expected, const char* what) {
    if (done()) fail(std::string("unexpected end of input, expected ") + what);
    const auto& l = current();
    if (expected != 0 && l.tokens.size() != expected)
      fail(std::string(what) + ": expected " + std::to_string(expected) + " fields, found " +
           std::to_string(l.tokens.size()));
    ++next_;
    return l.tokens;
  }
  /// Raw text of the current line after the first token.
  std::string rest_of_line() const {
    const auto& l = current();
    std::string_view s = l.raw;
    const auto start = s.find(l.tokens[0]) + l.tokens[0].size();
    s = s.substr(start);
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return std::string(s);
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(Errc::Parse, "line " + std::to_string(line_number()) + ": " + msg);
  }

 private:
  struct Line {
    int number;
    std::vector<std::string_view> tokens;
    std::string_view raw;
  };
  static bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }
  const Line& current() const { return lines_[next_]; }
  int last_line() const { return lines_.empty() ? 0 : lines_.back().number; }

  std::vector<Line> lines_;
  std::size_t next_ = 0;
};

long long parse_int(const LineReader& in, std::string_view tok) {
  long long v = 0;
  const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size()) in.fail("not an integer: '" + std::string(tok) + "'");
  return v;
}

double parse_double(const LineReader& in, std::string_view tok) {
  double v = 0.0;
  const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size()) in.fail("not a number: '" + std::string(tok) + "'");
  if (!std::isfinite(v)) in.fail("non-finite number");
  return v;
}

long long parse_bounded(const LineReader& in, std::string_view tok, long long lo, long long hi, const char* what) {
  const long long v = parse_int(in, tok);
  if (v < lo || v > hi)
    in.fail(std::string(what) + " " + std::to_string(v) + " outside " + std::to_string(lo) + ".." +
            std::to_string(hi));
  return v;
}

void parse_header(LineReader& in, std::string_view magic) {
  const auto t = in.take(2, "header");
  if (t[0] != magic) in.fail("expected header '" + std::string(magic) + " <version>'");
  if (parse_int(in, t[1]) != kFormatVersion) in.fail("unsupported format version " + std::string(t[1]));
}

// Reads (block, row, col) at toks[pos..pos+2] and returns the canonical index.
Index parse_unit(const LineReader& in, const BlockShape& shape, const std::vector<std::string_view>& toks,
                 std::size_t pos) {
  const int a = static_cast<int>(parse_bounded(in, toks[pos], 0, shape.block_count() - 1, "block"));
  const int n = shape.block_dim(a);
  const int i = static_cast<int>(parse_bounded(in, toks[pos + 1], 0, n - 1, "row"));
  const int j = static_cast<int>(parse_bounded(in, toks[pos + 2], 0, n - 1, "column"));
  return shape.index(a, i, j);
}

std::vector<StructureMap::Entry> parse_entries(LineReader& in, const BlockShape& shape, int target_units,
                                               const char* what) {
  const auto head = in.take(2, what);
  const long long count = parse_bounded(in, head[1], 0, 100000000, "entry count");
  const std::size_t fields = 3 + 3 * static_cast<std::size_t>(target_units) + 2;
  std::vector<StructureMap::Entry> out;
  out.reserve(static_cast<std::size_t>(count));
  for (long long e = 0; e < count; ++e) {
    const auto t = in.take(fields, what);
    const Index src = parse_unit(in, shape, t, 0);
    Index tgt = 0;
    for (int u = 0; u < target_units; ++u)
      tgt = tgt * shape.dim() + parse_unit(in, shape, t, 3 + 3 * static_cast<std::size_t>(u));
    const cplx v(parse_double(in, t[fields - 2]), parse_double(in, t[fields - 1]));
    out.push_back({tgt, src, v});
  }
  std::vector<std::pair<Index, Index>> keys;
  for (const auto& e : out) keys.emplace_back(e.source, e.target);
  std::sort(keys.begin(), keys.end());
  if (std::adjacent_find(keys.begin(), keys.end()) != keys.end())
    throw Error(Errc::Parse, std::string(what) + ": duplicate coefficient");
  return out;
}

std::string unit_string(const BlockShape& shape, Index k) {
  const auto u = shape.locate(k);
  return std::to_string(u.block) + " " + std::to_string(u.row) + " " + std::to_string(u.col);
}

void emit_entries(std::ostringstream& os, const BlockShape& shape, const char* keyword,
                  std::vector<StructureMap::Entry> entries, int target_units) {
  std::sort(entries.begin(), entries.end(),
            [](const auto& x, const auto& y) { return std::tie(x.source, x.target) < std::tie(y.source, y.target); });
  os << keyword << ' ' << entries.size() << '\n';
  for (const auto& e : entries) {
    os << unit_string(shape, e.source);
    std::vector<Index> parts(static_cast<std::size_t>(target_units));
    Index t = e.target;
    for (int u = target_units - 1; u >= 0; --u) {
      parts[static_cast<std::size_t>(u)] = t % shape.dim();
      t /= shape.dim();
    }
    for (const Index p : parts) os << "  " << unit_string(shape, p);
    os << "  " << format_double(e.value.real()) << ' ' << format_double(e.value.imag()) << '\n';
  }
}

CMatrix parse_matrix(LineReader& in, Index rows, Index cols, const char* what) {
  const auto head = in.take(3, what);
  if (head[0] != "matrix") in.fail(std::string(what) + ": expected 'matrix <rows> <cols>'");
  if (parse_int(in, head[1]) != rows || parse_int(in, head[2]) != cols)
    in.fail(std::string(what) + ": expected a " + std::to_string(rows) + " x " + std::to_string(cols) + " matrix");
  CMatrix m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    const auto t = in.take(static_cast<std::size_t>(2 * cols), what);
    for (Index c = 0; c < cols; ++c)
      m(r, c) = cplx(parse_double(in, t[static_cast<std::size_t>(2 * c)]),
                     parse_double(in, t[static_cast<std::size_t>(2 * c + 1)]));
  }
  return m;
}

void emit_matrix(std::ostringstream& os, const CMatrix& m) {
  os << "matrix " << m.rows() << ' ' << m.cols() << '\n';
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) {
      if (c) os << "  ";
      os << format_double(m(r, c).real()) << ' ' << format_double(m(r, c).imag());
    }
    os << '\n';
  }
}

}  // namespace

std::string format_double(double x) {
  if (x == 0.0) x = 0.0;  // drop the sign of negative zero
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) throw Error(Errc::InvalidInput, "cannot format number");
  return std::string(buf, p);
}

QGFile parse_qg(std::string_view text) {
  LineReader in(text);
  parse_header(in, "dqg-qg");
  QGFile f;
  bool have_blocks = false;
  while (!in.done()) {
    const auto key = in.peek()[0];
    if (key == "name") {
      f.name = std::string(in.take(2, "name")[1]);
    } else if (key == "provenance") {
      f.provenance = in.rest_of_line();
      in.take(0, "provenance");
    } else if (key == "blocks") {
      if (have_blocks) in.fail("repeated 'blocks'");
      const auto t = in.take(0, "blocks");
      if (t.size() < 2) in.fail("blocks: at least one block size required");
      for (std::size_t i = 1; i < t.size(); ++i)
        f.blocks.push_back(static_cast<int>(parse_bounded(in, t[i], 1, 64, "block size")));
      have_blocks = true;
    } else if (key == "delta" || key == "epsilon" || key == "antipode") {
      if (!have_blocks) in.fail("'blocks' must precede '" + std::string(key) + "'");
      const BlockShape shape(f.blocks);
      if (key == "delta") {
        if (!f.delta.empty()) in.fail("repeated 'delta'");
        f.delta = parse_entries(in, shape, 2, "delta");
      } else if (key == "epsilon") {
        if (f.epsilon) in.fail("repeated 'epsilon'");
        f.epsilon = parse_entries(in, shape, 0, "epsilon");
      } else {
        if (f.antipode) in.fail("repeated 'antipode'");
        f.antipode = parse_entries(in, shape, 1, "antipode");
      }
    } else {
      in.fail("unknown field '" + std::string(key) + "' for dqg-qg version " + std::to_string(kFormatVersion));
    }
  }
  if (!have_blocks) in.fail("missing 'blocks'");
  if (f.delta.empty()) in.fail("missing 'delta'");
  return f;
}

std::string emit_qg(const QGFile& f) {
  std::ostringstream os;
  os << "dqg-qg " << f.version << '\n';
  if (!f.name.empty()) os << "name " << f.name << '\n';
  if (!f.provenance.empty()) os << "provenance " << f.provenance << '\n';
  os << "blocks";
  for (const int n : f.blocks) os << ' ' << n;
  os << '\n';
  const BlockShape shape(f.blocks);
  emit_entries(os, shape, "delta", f.delta, 2);
  if (f.epsilon) emit_entries(os, shape, "epsilon", *f.epsilon, 0);
  if (f.antipode) emit_entries(os, shape, "antipode", *f.antipode, 1);
  return os.str();
}

QuantumGroup to_quantum_group(const QGFile& f) {
  const BlockShape shape(f.blocks);
  QuantumGroup qg(f.name.empty() ? "unnamed" : f.name, shape,
                  StructureMap::from_entries(Space::algebra(shape), Space::tensor(shape, shape), f.delta));
  if (f.epsilon) qg.set_epsilon(StructureMap::from_entries(Space::algebra(shape), Space::scalars(), *f.epsilon));
  if (f.antipode)
    qg.set_antipode(StructureMap::from_entries(Space::algebra(shape), Space::algebra(shape), *f.antipode));
  return qg;
}

QGFile to_qg_file(const QuantumGroup& qg, bool structure) {
  QGFile f;
  f.name = qg.name();
  f.blocks = qg.shape().dims();
  f.delta = qg.delta().entries();
  if (structure && qg.epsilon()) f.epsilon = qg.epsilon()->entries();
  if (structure && qg.antipode()) f.antipode = qg.antipode()->entries();
  return f;
}

CycleFile parse_cycle(std::string_view text) {
  LineReader in(text);
  parse_header(in, "dqg-cycle");
  CycleFile f;
  {
    const auto t = in.take(2, "hdim");
    if (t[0] != "hdim") in.fail("expected 'hdim <n>'");
    f.hdim = parse_bounded(in, t[1], 1, kMaxHilbertDim, "hdim");
  }
  {
    const auto t = in.take(static_cast<std::size_t>(f.hdim) + 1, "gamma");
    if (t[0] != "gamma") in.fail("expected 'gamma' with one sign per basis vector");
    for (std::size_t i = 1; i < t.size(); ++i) {
      const long long s = parse_int(in, t[i]);
      if (s != 1 && s != -1) in.fail("gamma entries must be +1 or -1");
      f.gamma.push_back(static_cast<int>(s));
    }
  }
  {
    const auto t = in.take(1, "U");
    if (t[0] != "U") in.fail("expected 'U'");
    // Each block's size tells its n_a; hdim divides the row count.
    while (!in.done() && in.peek()[0] == "matrix") {
      const auto& h = in.peek();
      if (h.size() != 3) in.fail("U: expected 'matrix <rows> <cols>'");
      const long long rows = parse_int(in, h[1]);
      if (rows <= 0 || rows % f.hdim != 0 || rows / f.hdim > 64) in.fail("U: block size must be hdim * n_a");
      f.u_blocks.push_back(parse_matrix(in, rows, rows, "U block"));
    }
    if (f.u_blocks.empty()) in.fail("U: no blocks");
  }
  {
    const auto t = in.take(1, "F");
    if (t[0] != "F") in.fail("expected 'F'");
    f.f = parse_matrix(in, f.hdim, f.hdim, "F");
  }
  {
    const auto t = in.take(2, "pi");
    if (t[0] != "pi") in.fail("expected 'pi scalar' or 'pi self'");
    if (t[1] == "scalar") {
      f.pi_scalar = true;
    } else if (t[1] == "self") {
      f.pi_scalar = false;
      while (!in.done() && in.peek()[0] == "matrix") f.pi.push_back(parse_matrix(in, f.hdim, f.hdim, "pi"));
      if (f.pi.empty()) in.fail("pi self: no matrices");
    } else {
      in.fail("unknown pi kind '" + std::string(t[1]) + "'");
    }
  }
  if (!in.done())
    in.fail("unknown field '" + std::string(in.peek()[0]) + "' for dqg-cycle version " + std::to_string(kFormatVersion));
  return f;
}

std::string emit_cycle(const CycleFile& f) {
  std::ostringstream os;
  os << "dqg-cycle " << f.version << '\n';
  os << "hdim " << f.hdim << '\n';
  os << "gamma";
  for (const int s : f.gamma) os << ' ' << s;
  os << "\nU\n";
  for (const auto& b : f.u_blocks) emit_matrix(os, b);
  os << "F\n";
  emit_matrix(os, f.f);
  if (f.pi_scalar) {
    os << "pi scalar\n";
  } else {
    os << "pi self\n";
    for (const auto& m : f.pi) emit_matrix(os, m);
  }
  return os.str();
}

LoadedCycle to_cycle(const CycleFile& f, const QuantumGroup& qg, const HaarData& haar, double tol) {
  const BlockShape& shape = qg.shape();
  if (static_cast<int>(f.u_blocks.size()) != shape.block_count())
    throw Error(Errc::InvalidInput, "cycle has " + std::to_string(f.u_blocks.size()) + " U blocks, the algebra has " +
                                        std::to_string(shape.block_count()));
  for (int a = 0; a < shape.block_count(); ++a)
    if (f.u_blocks[static_cast<std::size_t>(a)].rows() != f.hdim * shape.block_dim(a))
      throw Error(Errc::InvalidInput, "U block " + std::to_string(a) + " has the wrong size for " + shape.to_string());
  if (!f.pi_scalar && static_cast<Index>(f.pi.size()) != qg.dim())
    throw Error(Errc::InvalidInput, "pi self needs one matrix per basis element (" + std::to_string(qg.dim()) + ")");

  ActionDatum ad = f.pi_scalar ? trivial_action(qg, haar) : self_action(qg, haar);
  CVector g(f.hdim);
  for (Index i = 0; i < f.hdim; ++i) g(i) = double(f.gamma[static_cast<std::size_t>(i)]);
  Cycle c{Representation("file", OperatorTensor(f.hdim, shape, f.u_blocks)),
          f.pi_scalar ? std::vector<CMatrix>{CMatrix::Identity(f.hdim, f.hdim)} : f.pi, f.f,
          g.asDiagonal().toDenseMatrix()};
  const CheckReport r = check_cycle(qg, ad, c, tol);
  if (const Check* bad = r.first_failure())
    throw Error(Errc::InvalidInput, "cycle condition '" + bad->name + "' fails (residual " +
                                        format_double(bad->residual) + ")");
  return {std::move(ad), std::move(c)};
}

CycleFile to_cycle_file(const Cycle& c, bool pi_scalar) {
  CycleFile f;
  f.hdim = c.hdim();
  for (Index i = 0; i < f.hdim; ++i) {
    const double s = c.gamma(i, i).real();
    f.gamma.push_back(s > 0 ? 1 : -1);
  }
  const CMatrix diag = CVector(c.gamma.diagonal()).asDiagonal().toDenseMatrix();
  if ((c.gamma - diag).cwiseAbs().maxCoeff() > 0.0 ||
      (c.gamma.diagonal().cwiseAbs().array() - 1.0).abs().maxCoeff() > 1e-12)
    throw Error(Errc::InvalidInput, "cycle files need a diagonal grading with entries +-1");
  f.u_blocks = c.u.u.blocks();
  f.f = c.f;
  f.pi_scalar = pi_scalar;
  if (!pi_scalar) f.pi = c.pi;
  return f;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Parse, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::InvalidInput, "cannot write '" + path + "'");
  out << text;
  if (!out) throw Error(Errc::InvalidInput, "write to '" + path + "' failed");
}

}  // namespace dqg
