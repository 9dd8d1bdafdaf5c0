// Copyright 2026 The bosonic Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <bosonic/pipeline.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace bosonic;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string &name) {
    const fs::path dir = fs::temp_directory_path() / ("bosonic_pipeline_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    return dir / name;
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

PipelineConfig config(const std::string &oracle, double E, double eps, int samples = 2000) {
    PipelineConfig c;
    c.oracle = oracle;
    c.E = E;
    c.epsilon = eps;
    c.samples = samples;
    return c;
}

int cli(const std::string &args) {
    const std::string cmd = std::string(BOSONIC_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

bool mentions(const std::vector<std::string> &failures, const std::string &what) {
    for (const auto &f : failures)
        if (f.find(what) != std::string::npos) return true;
    return false;
}

} // namespace

TEST(PipelineConfig, Validation) {
    EXPECT_THROW(config("identity", 0.0, 0.5).validate(), ConfigurationError);
    EXPECT_THROW(config("identity", 0.5, 0.0).validate(), ConfigurationError);
    EXPECT_THROW(config("identity", 0.5, 1.5).validate(), ConfigurationError);
    EXPECT_THROW(config("identity", 0.5, 0.5, 0).validate(), ConfigurationError);
    EXPECT_NO_THROW(config("identity", 0.5, 1.0).validate());
    EXPECT_THROW(compile_physical_unitary(config("identity", -1.0, 0.5)), ConfigurationError);
}

TEST(Pipeline, StageErrorsCarryTheStageName) {
    try {
        compile_physical_unitary(config("nonsense", 0.5, 0.5));
        FAIL() << "expected a configuration error";
    } catch (const ConfigurationError &e) {
        EXPECT_EQ(std::string(e.what()).rfind("oracle:", 0), 0u) << e.what();
    }
}

TEST(Pipeline, IdentityGivesZeroPolynomial) {
    const auto r = compile_physical_unitary(config("identity", 0.5, 0.5));
    EXPECT_TRUE(r.report.passed);
    EXPECT_TRUE(r.P.terms().empty());
    EXPECT_EQ(r.report.degree, 0);
    EXPECT_EQ(r.report.residuals.cross_block, 0.0);
    EXPECT_EQ(r.report.residuals.block_equality, 0.0);
    EXPECT_EQ(r.report.residuals.exponential_identity, 0.0);
    EXPECT_EQ(r.report.residuals.sampled_distance, 0.0);
}

TEST(Pipeline, RotationIsADiagonalLagrangePolynomial) {
    const double th = 0.4;
    const auto r = compile_physical_unitary(config("rotation:0.4", 0.25, 0.5));
    ASSERT_TRUE(r.report.passed);
    const int L = r.report.generator_cutoff;
    // only the diagonal offset: terms f(n) and i f(n) with no ladder powers
    std::vector<double> diag(L + 1, 0.0);
    for (const auto &t : r.P.terms()) {
        ASSERT_EQ(t.factors.size(), 1u);
        EXPECT_EQ(t.factors[0].dag, 0);
        EXPECT_EQ(t.factors[0].ann, 0);
        for (int n = 0; n <= L; ++n) diag[n] += (t.coeff * t.factors[0].poly.at(n)).real();
    }
    for (int n = 0; n <= L; ++n) {
        const double phase = std::fmod(th * n, kTwoPi);
        EXPECT_NEAR(std::remainder(diag[n] - phase, kTwoPi), 0.0, 1e-9) << "n = " << n;
    }
    EXPECT_LE(r.report.residuals.sampled_distance, 0.5);
}

TEST(Pipeline, DisplacementPassesWithDegreeAtMostThreeN) {
    const auto r = compile_physical_unitary(config("displacement:0.3", 0.5, 0.5));
    EXPECT_TRUE(r.report.passed) << to_json(r.report).dump(2);
    EXPECT_LE(r.report.degree, 3 * r.report.generator_cutoff);
    EXPECT_EQ(r.report.verification_cutoff, r.report.generator_cutoff + r.report.degree + 2);
    EXPECT_LE(r.report.residuals.cross_block, 1e-12);
    EXPECT_LE(r.report.residuals.exponential_identity, 1e-9);
    EXPECT_LE(r.report.residuals.sampled_distance, 0.5);
}

TEST(Verify, FreshArtifactsPass) {
    PipelineConfig c = config("squeezing:0.2", 0.25, 1.0);
    c.polynomial_out = scratch("sq_P.json").string();
    c.report_out = scratch("sq_report.json").string();
    const auto r = compile_physical_unitary(c);
    ASSERT_TRUE(r.report.passed);
    const auto v = verify_files(c.polynomial_out, c.report_out);
    EXPECT_TRUE(v.passed) << to_json(v).dump(2);
    EXPECT_EQ(to_json(v.certificate), to_json(r.report.certificate));
    EXPECT_EQ(v.residuals.sampled_distance, r.report.residuals.sampled_distance);
}

TEST(Verify, PerturbedCoefficientFailsBlockEquality) {
    const auto r = compile_physical_unitary(config("kerr:0.3", 0.25, 1.0));
    json P = to_json(r.P);
    ASSERT_FALSE(P.at("terms").empty());
    P["terms"][0]["coeff"][0] = P["terms"][0]["coeff"][0].get<double>() + 1e-3;
    const auto v = verify(P, to_json(r.report));
    EXPECT_FALSE(v.passed);
    EXPECT_TRUE(mentions(v.failures, "block of eval(P) equals the generator"));
    EXPECT_GE(v.residuals.block_equality, 1e-3 * 0.5);
}

TEST(Verify, PerturbedCoefficientListIsCaught) {
    const auto r = compile_physical_unitary(config("rotation:0.4", 0.25, 1.0));
    json P = to_json(r.P);
    bool changed = false;
    for (auto &t : P["terms"])
        for (auto &f : t["factors"])
            if (!changed && f.contains("num_poly") && f.contains("nodes")) {
                f["num_poly"][0] = f["num_poly"][0].get<double>() + 1e-3;
                changed = true;
            }
    ASSERT_TRUE(changed);
    const auto v = verify(P, to_json(r.report));
    EXPECT_FALSE(v.passed);
    EXPECT_TRUE(mentions(v.failures, "num_poly"));
}

TEST(Verify, ForgedDeltaIsAnInvariantFailure) {
    const auto r = compile_physical_unitary(config("rotation:0.4", 0.25, 1.0));
    json rep = to_json(r.report);
    rep["certificate"]["delta"] = 1.0 / (2.0 * r.report.certificate.M);
    const auto v = verify(to_json(r.P), rep);
    EXPECT_FALSE(v.passed);
    EXPECT_TRUE(mentions(v.failures, "delta < 1/(2M)"));
}

TEST(Verify, ForeignPolynomialIsRejected) {
    const auto a = compile_physical_unitary(config("rotation:0.4", 0.25, 1.0));
    const auto b = compile_physical_unitary(config("kerr:0.3", 0.25, 1.0));
    const auto v = verify(to_json(b.P), to_json(a.report));
    EXPECT_FALSE(v.passed);
}

TEST(Verify, CompiledBuiltinsPassOnAGrid) {
    for (const auto &spec : builtin_oracle_specs())
        for (auto [E, eps] : {std::pair{0.25, 1.0}, std::pair{0.5, 0.5}}) {
            const auto r = compile_physical_unitary(config(spec, E, eps, 500));
            SCOPED_TRACE(spec + " E = " + std::to_string(E) + " eps = " + std::to_string(eps));
            EXPECT_TRUE(r.report.passed);
            const auto v = verify(to_json(r.P), to_json(r.report));
            EXPECT_TRUE(v.passed) << to_json(v).dump(2);
        }
}

TEST(Pipeline, DeterministicReports) {
    const auto a = compile_physical_unitary(config("displacement:0.3", 0.25, 1.0));
    const auto b = compile_physical_unitary(config("displacement:0.3", 0.25, 1.0));
    EXPECT_EQ(to_json(a.P).dump(), to_json(b.P).dump());
    EXPECT_EQ(to_json(a.report, false).dump(), to_json(b.report, false).dump());
    EXPECT_EQ(strip_timings(to_json(a.report)), to_json(a.report, false));
}

TEST(Cli, CompileVerifyAndExitCodes) {
    const std::string P = scratch("cli_P.json").string(), rep = scratch("cli_report.json").string();
    ASSERT_EQ(cli("compile --oracle rotation:0.4 --energy 0.25 --eps 1 --samples 300 --out " + P +
                  " --json-report " + rep),
              0);
    EXPECT_EQ(read_json_file(rep).at("status"), "pass");
    EXPECT_EQ(cli("verify --polynomial " + P + " --report " + rep), 0);

    json pj = read_json_file(P);
    pj["terms"][0]["coeff"][0] = pj["terms"][0]["coeff"][0].get<double>() + 1e-3;
    const std::string bad = scratch("cli_P_bad.json").string();
    write_json_file(bad, pj);
    EXPECT_EQ(cli("verify --polynomial " + bad + " --report " + rep), 2);

    EXPECT_EQ(cli("compile --oracle nonsense --energy 0.25 --eps 1 --out " + P), 3);
    EXPECT_EQ(cli("compile --oracle identity --energy 0.25 --eps 2 --out " + P), 3);
    EXPECT_EQ(cli("compile --oracle identity --energy 0.25"), 3);
    EXPECT_EQ(cli("frobnicate"), 3);
}

TEST(Cli, OtherSubcommands) {
    const std::string cert = scratch("cert.json").string();
    EXPECT_EQ(cli("truncate --oracle kerr:0.3 --energy 0.25 --eps 1 --samples 300 --out " + cert), 0);
    EXPECT_EQ(certificate_from_json(read_json_file(cert)).oracle, "kerr:0.3");

    Mat h(2, 2);
    h << 0.5, cplx(0.25, -0.5), cplx(0.25, 0.5), -1.0;
    const std::string hf = scratch("h.json").string(), pf = scratch("h_P.json").string(),
                      qf = scratch("h_qp.json").string();
    write_json_file(hf, matrix_to_json(h));
    EXPECT_EQ(cli("synth --hamiltonian " + hf + " --out " + pf + " --qp " + qf), 0);
    const PolyHamiltonian P = polyham_from_json(read_json_file(pf));
    EXPECT_LT(max_abs(eval_matrix(P, 1).mat() - h), 1e-14);
    EXPECT_TRUE(read_json_file(qf).contains("monomials"));
    EXPECT_EQ(cli("synth --hamiltonian " + hf + " --modes 2 --cutoffs 1 --out " + pf), 3);

    const std::string tf = scratch("target.json").string(), of = scratch("prep.json").string();
    write_json_file(tf, json::array({json::array({0.8, 0.0}), json::array({0.0, 0.6})}));
    EXPECT_EQ(cli("prepare-state --target " + tf + " --eps 0.1 --out " + of), 0);
    EXPECT_EQ(read_json_file(of).at("d_eps").get<int>(), 1);
    EXPECT_EQ(cli("prepare-state --target " + tf + " --eps 1.5 --out " + of), 3);

    const std::string wf = scratch("word.json").string();
    EXPECT_EQ(cli("sk-compile --oracle kerr:0.2 --energy 0.02 --eps 0.8 --gateset ht:3 --net-eps0 0.2 --net-length "
                  "24 --samples 300 --fit-targets 2 --out " +
                  wf),
              0);
    const json w = read_json_file(wf);
    for (const char *k : {"indices", "net_unitary", "lifted_gates", "certificate", "sk_fit", "global_phase"})
        EXPECT_TRUE(w.contains(k)) << k;
    EXPECT_EQ(cli("sk-compile --oracle kerr:0.2 --energy 0.5 --eps 0.7 --gateset ht:3 --out " + wf), 3);
}
