#pragma once

#include <iosfwd>

#include "prham/momentum.hpp"

namespace prham {

class ParseError : public std::runtime_error {
public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Lie (bi)algebra text block: `dim` followed by nonzero `c i j k value` and
/// `delta i j k value` triplets (0-based indices, hexfloat values for exact
/// round trips).
void write_algebra(std::ostream& os, const LieBialgebra& a);
LieBialgebra read_algebra(std::istream& is);

/// Fields as a flat coefficient array with a header carrying the backend
/// kind, truncation, padding and a component tag.
void write_scalar(std::ostream& os, const ScalarField& f);
ScalarField read_scalar(std::istream& is);
void write_oneform(std::ostream& os, const OneForm& w);
OneForm read_oneform(std::istream& is);

/// Dense row-major float64 matrix with a dimension header line followed by
/// raw little-endian payload (flow operators, context blobs).
void write_matrix(std::ostream& os, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_matrix(std::istream& is);

/// Momentum map: the algebra block plus one 1-form block per basis element.
void write_momentum_map(std::ostream& os, const MomentumMap1& m);
MomentumMap1 read_momentum_map(std::istream& is);

}  // namespace prham
