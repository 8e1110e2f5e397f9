#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "cpasym/json_io.hpp"
#include "support/test_support.hpp"

using namespace cpasym;
namespace fs = std::filesystem;
using cpasym::io::Json;

namespace {

fs::path fresh_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("cpasym_test_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(CPASYM_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

} // namespace

TEST_CASE("json round trips are bit-exact") {
    std::mt19937_64 rng(2718);
    const BlockStructure s({2, 3});

    SUBCASE("block structure") {
        const Json j = io::block_structure_to_json(s);
        CHECK(io::block_structure_from_json(j) == s);
    }

    SUBCASE("algebra element") {
        for (int trial = 0; trial < 5; ++trial) {
            const AlgebraElement a = testsup::random_element(s, rng);
            // through a serialized string, as the CLI would do it
            const Json j = Json::parse(io::element_to_json(a).dump());
            const AlgebraElement back = io::element_from_json(j);
            REQUIRE(back.structure() == s);
            for (int k = 0; k < s.blocks(); ++k) {
                CHECK((back.block(k) - a.block(k)).cwiseAbs().maxCoeff() == 0.0);
            }
        }
    }

    SUBCASE("cpmap with kraus data") {
        const CpMap p = gen::random_unital_channel(s, 2, 31);
        const Json j = Json::parse(io::cpmap_to_json(p).dump());
        const CpMap back = io::cpmap_from_json(j);
        CHECK((back.superop() - p.superop()).cwiseAbs().maxCoeff() == 0.0);
        REQUIRE(back.kraus().size() == p.kraus().size());
        CHECK(back.flags().completely_positive == true);
    }

    SUBCASE("kraus shorthand") {
        const CpMap p = gen::dephasing_channel(0.25);
        Json j;
        j["structure"] = io::block_structure_to_json(p.structure());
        Json kraus = Json::array();
        for (const Matrix& a : p.kraus()) kraus.push_back(io::matrix_to_json(a));
        j["kraus"] = std::move(kraus);
        const CpMap back = io::cpmap_from_json(Json::parse(j.dump()));
        CHECK(map_sup_difference(back, p) < 1e-15);
    }

    SUBCASE("inconsistent kraus and superop is rejected") {
        Json j = io::cpmap_to_json(gen::dephasing_channel(0.25));
        j["superop"] = io::matrix_to_json(Matrix::Identity(4, 4));
        CHECK_THROWS_AS(io::cpmap_from_json(j), StructuralError);
    }

    SUBCASE("stochastic") {
        std::mt19937_64 r2(5);
        const auto S = testsup::random_irreducible_stochastic(5, 2, r2);
        const auto back = io::stochastic_from_json(io::stochastic_to_json(S));
        CHECK((back.entries() - S.entries()).cwiseAbs().maxCoeff() == 0.0);
    }

    SUBCASE("element shape errors") {
        CHECK_THROWS_AS(io::element_from_json(Json::array()), StructuralError);
        Json ragged = Json::array();
        ragged.push_back(Json::array({Json::array({1.0, 0.0}), Json::array({0.0, 0.0})}));
        CHECK_THROWS_AS(io::element_from_json(ragged), StructuralError);  // length 2 not square
    }
}

TEST_CASE("group and generator ingestion") {
    SUBCASE("builtin group with phi") {
        Json j;
        j["group"]["builtin"] = "Z4";
        j["phi"] = Json::array({Json::array({1.0, 0.0}), Json::array({0.0, 0.0}),
                                Json::array({1.0, 0.0}), Json::array({0.0, 0.0})});
        const auto phi = io::group_phi_from_json(j);
        CHECK(phi.group.order() == 4);
        CHECK(gen::kernel_subgroup(phi) == std::vector<int>{0, 2});
    }

    SUBCASE("gkls generator") {
        Json j;
        j["form"] = "gkls";
        Matrix h(2, 2);
        h << 1.0, 0.0, 0.0, -1.0;
        j["H"] = io::element_to_json(AlgebraElement(BlockStructure({2}), {h}));
        j["jumps"] = Json::array();
        const auto L = io::generator_from_json(j);
        CHECK(L.form == cpasym::sg::GeneratorForm::gkls);
        CHECK(L.structure.dims() == std::vector<int>{2});
    }
}

TEST_CASE("spectral report fragment") {
    const auto dec = spectral_decomposition(gen::dephasing_channel(0.25));
    const Json j = io::spectral_report(dec);
    CHECK(j["gap"].get<double>() == doctest::Approx(0.5));
    CHECK(j["semisimple"].get<bool>());
    CHECK(j["peripheral_count"].get<int>() == 2);
    // clustered rows: {1 (x2, peripheral), 0.5 (x2, not)}
    REQUIRE(j["eigenvalues"].size() == 2);
    CHECK(j["eigenvalues"][0][2].get<int>() == 2);
    CHECK(j["eigenvalues"][0][3].get<bool>() == true);
    CHECK(j["eigenvalues"][1][3].get<bool>() == false);
}

TEST_CASE("cli end to end") {
    const fs::path dir = fresh_dir("cli");

    // dephasing channel as a kraus file
    const CpMap deph = gen::dephasing_channel(0.25);
    Json in;
    in["structure"] = io::block_structure_to_json(deph.structure());
    Json kraus = Json::array();
    for (const Matrix& a : deph.kraus()) kraus.push_back(io::matrix_to_json(a));
    in["kraus"] = std::move(kraus);
    io::write_json_file(dir / "dephasing.json", in);

    SUBCASE("dephasing: spectrum + asymptotics + mixing") {
        const std::string args = "analyze --kind kraus --in " + (dir / "dephasing.json").string() +
                                 " --out " + (dir / "out1").string() +
                                 " --analyses spectrum,asymptotics,mixing --seed 7";
        CHECK(run_cli(args) == 0);
        const Json report = io::load_json_file(dir / "out1" / "report.json");
        CHECK(report["spectrum"]["gap"].get<double>() == doctest::Approx(0.5));
        CHECK(report["mixing"]["mixing"].get<bool>() == false);
        CHECK(report["asymptotics"]["verdicts"]["passed"].get<bool>());
        CHECK(fs::exists(dir / "out1" / "convergence_profile.csv"));

        // determinism: same request, byte-identical report
        CHECK(run_cli("analyze --kind kraus --in " + (dir / "dephasing.json").string() +
                      " --out " + (dir / "out2").string() +
                      " --analyses spectrum,asymptotics,mixing --seed 7") == 0);
        CHECK(slurp(dir / "out1" / "report.json") == slurp(dir / "out2" / "report.json"));
    }

    SUBCASE("stochastic flip with pf analysis") {
        std::ofstream csv(dir / "flip.csv");
        csv << "0,1\n1,0\n";
        csv.close();
        CHECK(run_cli("analyze --kind stochastic --in " + (dir / "flip.csv").string() +
                      " --out " + (dir / "outpf").string()) == 0);
        const Json report = io::load_json_file(dir / "outpf" / "report.json");
        CHECK(report["pf"]["period"].get<int>() == 2);
        CHECK(report["pf"]["passed"].get<bool>());
        CHECK(report["uniqueness"]["passed"].get<bool>());
    }

    SUBCASE("malformed input exits 3 without a report") {
        std::ofstream bad(dir / "bad.json");
        bad << "{ not json";
        bad.close();
        CHECK(run_cli("analyze --kind kraus --in " + (dir / "bad.json").string() +
                      " --out " + (dir / "outbad").string()) == 3);
        CHECK_FALSE(fs::exists(dir / "outbad" / "report.json"));
    }

    SUBCASE("incompatible analysis exits 3") {
        CHECK(run_cli("analyze --kind kraus --in " + (dir / "dephasing.json").string() +
                      " --out " + (dir / "outx").string() + " --analyses pf") == 3);
    }

    SUBCASE("multiple inputs fan out across jobs into per-input directories") {
        const CpMap damping = gen::amplitude_damping_channel(0.5);
        Json in2;
        in2["structure"] = io::block_structure_to_json(damping.structure());
        Json kraus2 = Json::array();
        for (const Matrix& a : damping.kraus()) kraus2.push_back(io::matrix_to_json(a));
        in2["kraus"] = std::move(kraus2);
        io::write_json_file(dir / "damping.json", in2);

        CHECK(run_cli("analyze --kind kraus --in " + (dir / "dephasing.json").string() +
                      " --in " + (dir / "damping.json").string() + " --out " +
                      (dir / "outs").string() + " --analyses asymptotics,mixing --jobs 2") ==
              0);
        const Json r1 = io::load_json_file(dir / "outs" / "dephasing" / "report.json");
        const Json r2 = io::load_json_file(dir / "outs" / "damping" / "report.json");
        CHECK(r1["mixing"]["mixing"].get<bool>() == false);
        CHECK(r2["mixing"]["mixing"].get<bool>() == true);
    }
}
