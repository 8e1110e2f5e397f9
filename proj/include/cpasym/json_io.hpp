// json_io.hpp — JSON (de)serialization for the library types and the CSV
// profile writers used by the CLI.
//
// Conventions: a complex number is a two-element array [re, im]; a matrix is
// an array of rows of such pairs; an algebra element is an array of blocks,
// each a flat row-major array of pairs (block sizes determine the structure).

#pragma once

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

#include "cpasym/algebra.hpp"
#include "cpasym/cpmap.hpp"
#include "cpasym/generators.hpp"
#include "cpasym/perron_frobenius.hpp"
#include "cpasym/semigroup.hpp"
#include "cpasym/spectral.hpp"

namespace cpasym::io {

using Json = nlohmann::ordered_json;

Json block_structure_to_json(const BlockStructure& s);
BlockStructure block_structure_from_json(const Json& j);

Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

Json real_matrix_to_json(const RealMatrix& m);
RealMatrix real_matrix_from_json(const Json& j);

Json vector_to_json(const Vector& v);

Json element_to_json(const AlgebraElement& a);
AlgebraElement element_from_json(const Json& j);

// {"structure": [...], "superop": ..., "kraus": optional [...], "flags": {...}}
// A file carrying only "structure" and "kraus" is accepted as the Kraus
// shorthand and assembled through from_kraus.
Json cpmap_to_json(const CpMap& P);
CpMap cpmap_from_json(const Json& j);

Json stochastic_to_json(const pf::StochasticMatrix& S);
pf::StochasticMatrix stochastic_from_json(const Json& j);
pf::StochasticMatrix stochastic_from_csv(const std::filesystem::path& path);

// {"group": {"builtin": "Z4"} | {"table": [[...]]}, "phi": [[re, im], ...]}
gen::PositiveDefiniteFunction group_phi_from_json(const Json& j);

// {"form": "gkls", "H": element, "jumps": [element...]} |
// {"form": "raw", "structure": [...], "L": matrix}
sg::SemigroupGenerator generator_from_json(const Json& j);

// Eigenvalue table [re, im, multiplicity, peripheral] (clustered within 1e-8),
// plus gap and the semisimplicity verdict.
Json spectral_report(const SpectralDecomposition& dec);

void write_profile_csv(const std::filesystem::path& path, const std::string& x_name,
                       const std::vector<double>& xs, const std::string& y_name,
                       const std::vector<double>& ys);

Json load_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& j);

} // namespace cpasym::io
