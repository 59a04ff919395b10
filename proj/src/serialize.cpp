#include "prham/serialize.hpp"

#include <cstring>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace prham {

namespace {

void write_value(std::ostream& os, double v) {
  os << std::hexfloat << v << std::defaultfloat;
}

double read_value(std::istream& is) {
  std::string tok;
  if (!(is >> tok)) throw ParseError("unexpected end of stream while reading a value");
  // strtod handles hexfloat; iostream extraction of hexfloat is unreliable
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end == tok.c_str()) throw ParseError("malformed float: " + tok);
  return v;
}

std::string expect_word(std::istream& is, const char* what) {
  std::string tok;
  if (!(is >> tok)) throw ParseError(std::string("unexpected end of stream, wanted ") + what);
  return tok;
}

void expect_keyword(std::istream& is, const std::string& kw) {
  const std::string tok = expect_word(is, kw.c_str());
  if (tok != kw) throw ParseError("expected '" + kw + "', got '" + tok + "'");
}

void write_backend_header(std::ostream& os, const Backend& b) {
  os << "backend " << (b.kind() == BackendKind::Torus2 ? "torus2" : "sphere2") << ' '
     << b.truncation() << ' ' << b.padding() << '\n';
}

BackendPtr read_backend_header(std::istream& is) {
  expect_keyword(is, "backend");
  const std::string kind = expect_word(is, "backend kind");
  int n = 0, padding = 0;
  if (!(is >> n >> padding)) throw ParseError("malformed backend header");
  if (kind == "torus2") return Backend::torus(n, padding);
  if (kind == "sphere2") return Backend::sphere(n, padding);
  throw ParseError("unknown backend kind: " + kind);
}

void write_coeffs(std::ostream& os, const Eigen::VectorXd& c) {
  os << "coeffs " << c.size() << '\n';
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    write_value(os, c[i]);
    os << '\n';
  }
}

Eigen::VectorXd read_coeffs(std::istream& is) {
  expect_keyword(is, "coeffs");
  Eigen::Index n = 0;
  if (!(is >> n) || n < 0) throw ParseError("malformed coefficient count");
  Eigen::VectorXd c(n);
  for (Eigen::Index i = 0; i < n; ++i) c[i] = read_value(is);
  return c;
}

}  // namespace

void write_algebra(std::ostream& os, const LieBialgebra& a) {
  const int n = a.dim();
  os << "dim " << n << '\n';
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (a.base().c(i, j, k) != 0.0) {
          os << "c " << i << ' ' << j << ' ' << k << ' ';
          write_value(os, a.base().c(i, j, k));
          os << '\n';
        }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        if (a.d(i, j, k) != 0.0) {
          os << "delta " << i << ' ' << j << ' ' << k << ' ';
          write_value(os, a.d(i, j, k));
          os << '\n';
        }
  os << "end\n";
}

LieBialgebra read_algebra(std::istream& is) {
  expect_keyword(is, "dim");
  int n = 0;
  if (!(is >> n) || n <= 0) throw ParseError("malformed algebra dimension");
  std::vector<double> c(std::size_t(n) * n * n, 0.0);
  std::vector<double> dd(std::size_t(n) * n * n, 0.0);
  for (std::string tok; (tok = expect_word(is, "'c', 'delta' or 'end'")) != "end";) {
    int i, j, k;
    if (!(is >> i >> j >> k)) throw ParseError("malformed triplet indices");
    if (i < 0 || j < 0 || k < 0 || i >= n || j >= n || k >= n)
      throw ParseError("triplet index out of range");
    const double v = read_value(is);
    if (tok == "c") {
      c[(std::size_t(i) * n + j) * n + k] = v;
    } else if (tok == "delta") {
      dd[(std::size_t(i) * n + j) * n + k] = v;
      dd[(std::size_t(i) * n + k) * n + j] = -v;
    } else {
      throw ParseError("unknown record: " + tok);
    }
  }
  return LieBialgebra(LieAlgebra(n, std::move(c)), std::move(dd));
}

void write_scalar(std::ostream& os, const ScalarField& f) {
  os << "field scalar\n";
  write_backend_header(os, *f.backend());
  write_coeffs(os, f.coeffs());
}

ScalarField read_scalar(std::istream& is) {
  expect_keyword(is, "field");
  expect_keyword(is, "scalar");
  auto b = read_backend_header(is);
  return ScalarField(b, read_coeffs(is));
}

void write_oneform(std::ostream& os, const OneForm& w) {
  os << "field oneform\n";
  write_backend_header(os, *w.backend());
  write_coeffs(os, w.coeffs());
}

OneForm read_oneform(std::istream& is) {
  expect_keyword(is, "field");
  expect_keyword(is, "oneform");
  auto b = read_backend_header(is);
  return OneForm(b, read_coeffs(is));
}

void write_matrix(std::ostream& os, const Eigen::MatrixXd& m) {
  os << "matrix " << m.rows() << ' ' << m.cols() << '\n';
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      double v = m(r, c);
      char buf[sizeof(double)];
      std::memcpy(buf, &v, sizeof(double));
      os.write(buf, sizeof(double));
    }
}

Eigen::MatrixXd read_matrix(std::istream& is) {
  expect_keyword(is, "matrix");
  Eigen::Index rows = 0, cols = 0;
  if (!(is >> rows >> cols) || rows < 0 || cols < 0) throw ParseError("malformed matrix header");
  is.get();  // newline before the raw payload
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) {
      char buf[sizeof(double)];
      is.read(buf, sizeof(double));
      if (!is) throw ParseError("matrix payload truncated");
      double v;
      std::memcpy(&v, buf, sizeof(double));
      m(r, c) = v;
    }
  return m;
}

void write_momentum_map(std::ostream& os, const MomentumMap1& m) {
  os << "momentum_map " << m.dim() << '\n';
  write_algebra(os, m.algebra);
  for (const auto& f : m.forms) write_oneform(os, f);
}

MomentumMap1 read_momentum_map(std::istream& is) {
  expect_keyword(is, "momentum_map");
  int n = 0;
  if (!(is >> n) || n <= 0) throw ParseError("malformed momentum map header");
  LieBialgebra a = read_algebra(is);
  if (a.dim() != n) throw ParseError("momentum map dimension mismatch");
  std::vector<OneForm> forms;
  forms.reserve(n);
  for (int i = 0; i < n; ++i) forms.push_back(read_oneform(is));
  return MomentumMap1(std::move(a), std::move(forms));
}

}  // namespace prham
