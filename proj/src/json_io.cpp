// json_io.cpp — Serialization and file ingestion.

#include "cpasym/json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace cpasym::io {

namespace {

Complex pair_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 2) {
        throw StructuralError("json: complex value must be a [re, im] pair");
    }
    return Complex(j[0].get<double>(), j[1].get<double>());
}

Json pair_to_json(Complex z) {
    return Json::array({z.real(), z.imag()});
}

gen::FiniteGroup group_from_json(const Json& j) {
    if (j.contains("builtin")) {
        const std::string name = j["builtin"].get<std::string>();
        if (name == "S3") return gen::FiniteGroup::symmetric3();
        if (name == "D4") return gen::FiniteGroup::dihedral4();
        if (name.size() >= 2 && name[0] == 'Z') {
            const int n = std::stoi(name.substr(1));
            return gen::FiniteGroup::cyclic(n);
        }
        throw DomainError("json: unknown builtin group '" + name + "'");
    }
    if (j.contains("table")) {
        return gen::FiniteGroup(j["table"].get<std::vector<std::vector<int>>>());
    }
    throw StructuralError("json: group needs 'builtin' or 'table'");
}

} // namespace

Json block_structure_to_json(const BlockStructure& s) {
    return Json(s.dims());
}

BlockStructure block_structure_from_json(const Json& j) {
    if (!j.is_array() || j.empty()) {
        throw StructuralError("json: block structure must be a nonempty array of dims");
    }
    return BlockStructure(j.get<std::vector<int>>());
}

Json matrix_to_json(const Matrix& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(pair_to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const Json& j) {
    if (!j.is_array() || j.empty()) throw StructuralError("json: matrix must be an array");
    const std::size_t rows = j.size();
    const std::size_t cols = j[0].size();
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < rows; ++i) {
        if (j[i].size() != cols) throw StructuralError("json: ragged matrix rows");
        for (std::size_t c = 0; c < cols; ++c) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
                pair_from_json(j[i][c]);
        }
    }
    return m;
}

Json real_matrix_to_json(const RealMatrix& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

RealMatrix real_matrix_from_json(const Json& j) {
    if (!j.is_array() || j.empty()) throw StructuralError("json: matrix must be an array");
    const std::size_t rows = j.size();
    const std::size_t cols = j[0].size();
    RealMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < rows; ++i) {
        if (j[i].size() != cols) throw StructuralError("json: ragged matrix rows");
        for (std::size_t c = 0; c < cols; ++c) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
                j[i][c].get<double>();
        }
    }
    return m;
}

Json vector_to_json(const Vector& v) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(pair_to_json(v(i)));
    return out;
}

Json element_to_json(const AlgebraElement& a) {
    Json blocks = Json::array();
    for (const Matrix& b : a.blocks()) {
        Json flat = Json::array();
        for (Eigen::Index i = 0; i < b.rows(); ++i) {       // row-major on purpose
            for (Eigen::Index j = 0; j < b.cols(); ++j) flat.push_back(pair_to_json(b(i, j)));
        }
        blocks.push_back(std::move(flat));
    }
    return blocks;
}

AlgebraElement element_from_json(const Json& j) {
    if (!j.is_array() || j.empty()) {
        throw StructuralError("json: element must be a nonempty array of blocks");
    }
    std::vector<int> dims;
    std::vector<Matrix> blocks;
    for (const Json& blk : j) {
        const std::size_t len = blk.size();
        const int d = static_cast<int>(std::lround(std::sqrt(double(len))));
        if (d < 1 || static_cast<std::size_t>(d) * static_cast<std::size_t>(d) != len) {
            throw StructuralError("json: block length is not a perfect square");
        }
        Matrix m(d, d);
        std::size_t pos = 0;
        for (int i = 0; i < d; ++i) {
            for (int c = 0; c < d; ++c) m(i, c) = pair_from_json(blk[pos++]);
        }
        dims.push_back(d);
        blocks.push_back(std::move(m));
    }
    return AlgebraElement(BlockStructure(dims), std::move(blocks));
}

Json cpmap_to_json(const CpMap& P) {
    Json j;
    j["structure"] = block_structure_to_json(P.structure());
    j["superop"] = matrix_to_json(P.superop());
    if (P.has_kraus()) {
        Json kraus = Json::array();
        for (const Matrix& a : P.kraus()) kraus.push_back(matrix_to_json(a));
        j["kraus"] = std::move(kraus);
    }
    Json flags;
    const auto flag_json = [](std::optional<bool> f) {
        return f.has_value() ? Json(*f) : Json(nullptr);
    };
    flags["completely_positive"] = flag_json(P.flags().completely_positive);
    flags["unital"] = flag_json(P.flags().unital);
    flags["contraction"] = flag_json(P.flags().contraction);
    j["flags"] = std::move(flags);
    return j;
}

CpMap cpmap_from_json(const Json& j) {
    const BlockStructure structure = block_structure_from_json(j.at("structure"));
    std::vector<Matrix> kraus;
    if (j.contains("kraus")) {
        for (const Json& k : j["kraus"]) kraus.push_back(matrix_from_json(k));
    }
    if (!j.contains("superop")) {
        if (kraus.empty()) {
            throw StructuralError("json: cpmap needs 'superop' or 'kraus'");
        }
        return from_kraus(structure, kraus);
    }
    Matrix superop = matrix_from_json(j["superop"]);
    MapFlags flags;
    if (j.contains("flags")) {
        const Json& f = j["flags"];
        const auto read_flag = [&f](const char* name) -> std::optional<bool> {
            if (!f.contains(name) || f[name].is_null()) return std::nullopt;
            return f[name].get<bool>();
        };
        flags.completely_positive = read_flag("completely_positive");
        flags.unital = read_flag("unital");
        flags.contraction = read_flag("contraction");
    }
    if (!kraus.empty()) {
        const CpMap assembled = from_kraus(structure, kraus);
        const double defect = map_norm(structure, superop - assembled.superop());
        if (defect > 1e-12 * std::max(1.0, map_norm(structure, superop))) {
            throw StructuralError("json: superop disagrees with the Kraus action");
        }
    }
    return CpMap(structure, std::move(superop), flags, std::move(kraus));
}

Json stochastic_to_json(const pf::StochasticMatrix& S) {
    Json j;
    j["matrix"] = real_matrix_to_json(S.entries());
    return j;
}

pf::StochasticMatrix stochastic_from_json(const Json& j) {
    const Json& m = j.contains("matrix") ? j["matrix"] : j;
    return pf::StochasticMatrix(real_matrix_from_json(m));
}

pf::StochasticMatrix stochastic_from_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw StructuralError("csv: cannot open " + path.string());
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw StructuralError("csv: empty file " + path.string());
    const std::size_t n = rows.size();
    RealMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != n) throw StructuralError("csv: matrix must be square");
        for (std::size_t c = 0; c < n; ++c) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = rows[i][c];
        }
    }
    return pf::StochasticMatrix(m);
}

gen::PositiveDefiniteFunction group_phi_from_json(const Json& j) {
    gen::FiniteGroup group = group_from_json(j.at("group"));
    std::vector<Complex> phi;
    for (const Json& v : j.at("phi")) phi.push_back(pair_from_json(v));
    return gen::PositiveDefiniteFunction(std::move(group), std::move(phi));
}

sg::SemigroupGenerator generator_from_json(const Json& j) {
    const std::string form = j.at("form").get<std::string>();
    if (form == "gkls") {
        const AlgebraElement h = element_from_json(j.at("H"));
        std::vector<AlgebraElement> jumps;
        if (j.contains("jumps")) {
            for (const Json& v : j["jumps"]) jumps.push_back(element_from_json(v));
        }
        return sg::gkls_generator(h, jumps);
    }
    if (form == "raw") {
        const BlockStructure structure = block_structure_from_json(j.at("structure"));
        return sg::raw_generator(structure, matrix_from_json(j.at("L")));
    }
    throw DomainError("json: generator form must be 'gkls' or 'raw'");
}

Json spectral_report(const SpectralDecomposition& dec) {
    Json rows = Json::array();
    std::vector<bool> used(dec.eigenvalues.size(), false);
    std::vector<bool> peripheral(dec.eigenvalues.size(), false);
    for (int idx : dec.peripheral_indices) peripheral[static_cast<std::size_t>(idx)] = true;
    for (std::size_t i = 0; i < dec.eigenvalues.size(); ++i) {
        if (used[i]) continue;
        int multiplicity = 0;
        for (std::size_t k = i; k < dec.eigenvalues.size(); ++k) {
            if (!used[k] && std::abs(dec.eigenvalues[i] - dec.eigenvalues[k]) <= 1e-8) {
                used[k] = true;
                ++multiplicity;
            }
        }
        rows.push_back(Json::array({dec.eigenvalues[i].real(), dec.eigenvalues[i].imag(),
                                    multiplicity, peripheral[i]}));
    }
    Json j;
    j["eigenvalues"] = std::move(rows);
    j["gap"] = dec.gap;
    j["peripheral_count"] = dec.peripheral_indices.size();
    j["semisimple"] = check_peripheral_semisimple(dec);
    return j;
}

void write_profile_csv(const std::filesystem::path& path, const std::string& x_name,
                       const std::vector<double>& xs, const std::string& y_name,
                       const std::vector<double>& ys) {
    if (xs.size() != ys.size()) {
        throw StructuralError("write_profile_csv: column lengths differ");
    }
    std::ofstream out(path);
    if (!out) throw NumericalError("write_profile_csv: cannot open " + path.string());
    out << x_name << "," << y_name << "\n";
    out.precision(17);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        out << xs[i] << "," << ys[i] << "\n";
    }
}

Json load_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw StructuralError("json: cannot open " + path.string());
    Json j;
    in >> j;
    return j;
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw NumericalError("json: cannot open " + path.string() + " for writing");
    out << j.dump(2) << "\n";
}

} // namespace cpasym::io
