#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dvr/homology.hpp"

namespace dvr::cli {

// Input documents.  Line-oriented; `#` starts a comment.
//
//   field rational | field novikov grading=<0|2> tprec=<rational>
//   uprec <int>
//   matrix R C            followed by `r c = <series>` (1-based, absent = 0)
//   complex <name>        followed by `gen <id> deg <int>` and
//                         `diff <id> = <term> (± <term>)*`, term `<coef>[*u^<k>]*<id>`
//   system rank <r>       followed by `step <k>` + matrix block, k = 0, 1, ...
//   map                   followed by domain `gen` lines, a matrix block and
//                         `codomain shape free:[..] laurent:[..] tails:[..] torsion:[(k,d),..]`

template <class F>
struct MatrixBlock {
  DVRMatrix<F> m;
  int line = 0;
};

template <class F>
struct ComplexBlock {
  EqChainComplex<F> complex;
  int line = 0;
};

template <class F>
struct SystemBlock {
  int rank = 0;
  std::vector<DVRMatrix<F>> steps;
  int line = 0;
};

template <class F>
struct MapBlock {
  std::vector<Generator> domain;
  DVRMatrix<F> m;
  FGModuleShape codomain;
  int line = 0;
};

template <class F>
using Block = std::variant<MatrixBlock<F>, ComplexBlock<F>, SystemBlock<F>, MapBlock<F>>;

template <class F>
struct Document {
  FieldConfig field;
  int uprec = kDefaultPrecision;
  bool uprec_set = false;
  std::vector<Block<F>> blocks;
};

// Structural equality (line numbers are ignored).
template <class F>
bool same_document(const Document<F>& a, const Document<F>& b);

using AnyDocument = std::variant<Document<Rational>, Document<NovikovElem>>;

// Raises InputError with line and column on any syntax or validation error.
AnyDocument parse_document(std::string_view text);
std::string render_document(const AnyDocument& doc);
bool same_document(const AnyDocument& a, const AnyDocument& b);

// Series in document syntax (no T-precision terms: the header carries it).
template <class F>
std::string render_series(const USeries<F>& s);

// FGModuleShape in `codomain` syntax, without the leading keyword.
std::string render_shape(const FGModuleShape& s);
FGModuleShape parse_shape(std::string_view text);

struct Result {
  int exit_code = 0;
  std::string out, err;
};

// args excludes the program name.  Exit codes: 0 ok, 1 input error,
// 2 insufficient precision, 3 internal invariant failure.
Result run(const std::vector<std::string>& args);

}  // namespace dvr::cli
