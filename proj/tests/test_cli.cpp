#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "wfoot/csv.hpp"
#include "wfoot/errors.hpp"

using nlohmann::json;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;  // stdout only
};

RunResult run(const std::string& args) {
    const std::string cmd = std::string(WFOOTRULE_BIN) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult result;
    std::array<char, 4096> buf{};
    size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) {
        result.output.append(buf.data(), got);
    }
    const int status = pclose(pipe);
    result.exit_code = WEXITSTATUS(status);
    return result;
}

std::string write_temp_csv(const std::string& name, const std::string& content) {
    const std::string path = "/tmp/wfootrule_test_" + name;
    std::ofstream out(path);
    out << content;
    return path;
}

}  // namespace

TEST_CASE("no arguments prints usage and exits 1") {
    const RunResult r = run("");
    CHECK(r.exit_code == 1);
}

TEST_CASE("truth subcommand emits schema-complete json") {
    const RunResult r = run("truth --copula gaussian:rho=-0.9");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.output);
    CHECK(j.at("phi_w").get<double>() == doctest::Approx(-0.69675).epsilon(1e-4));
    CHECK(j.at("footrule").get<double>() == doctest::Approx(-0.45223).epsilon(1e-4));
    CHECK(j.at("gini").get<double>() ==
          doctest::Approx(2.0 / 3.0 * (-0.69675 - 0.45223)).epsilon(1e-4));
    CHECK(j.at("method").get<std::string>() == "closed_form");
    CHECK(j.at("error_bound").get<double>() == 0.0);

    const json q = json::parse(run("truth --copula clayton:theta=5 --tol 1e-9").output);
    CHECK(q.at("phi_w").get<double>() == doctest::Approx(0.46021).epsilon(1e-4));
    CHECK(q.at("method").get<std::string>() == "quadrature");
    CHECK(q.at("error_bound").get<double>() <= 1e-9);
}

TEST_CASE("truth rejects bad specs with a usage exit") {
    CHECK(run("truth --copula clayton:theta=-2").exit_code == 1);
    CHECK(run("truth --copula nothing").exit_code == 1);
    CHECK(run("truth").exit_code == 1);
    CHECK(run("truth --copula clayton:theta=5 --tol 1e-30").exit_code == 1);
}

TEST_CASE("numerical failure exits 2") {
    // The Frank CDF overflows double precision at extreme theta; the
    // quadrature cannot converge and must report a numerical failure.
    CHECK(run("truth --copula frank:theta=-700 --tol 1e-12").exit_code == 2);
}

TEST_CASE("estimate on countermonotone data finds the boundary") {
    const std::string path = write_temp_csv("counter.csv", "1,2\n2,1\n");
    const RunResult r = run("estimate --input " + path + " --json");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.output);
    CHECK(j.at("phi_hat").get<double>() == -1.0);
    CHECK(j.at("n").get<int>() == 2);
    CHECK(j.at("verdict").get<std::string>() == "boundary");
    for (const char* key : {"phi_hat", "footrule_hat", "gini_hat", "sigma_hat", "ci_low",
                            "ci_high", "p_value", "alpha"}) {
        CHECK(j.contains(key));
    }
}

TEST_CASE("estimate with header, named columns and text output") {
    const std::string path = write_temp_csv(
        "named.csv", "a,x,y\n9,1,5\n9,2,4\n9,3,3\n9,4,2\n9,5,1\n");
    const RunResult r = run("estimate --input " + path + " --cols x,y");
    REQUIRE(r.exit_code == 0);
    CHECK(r.output.find("phi_hat   -1.00000") != std::string::npos);
    CHECK(r.output.find("verdict   boundary") != std::string::npos);

    // Same data through 1-based indices.
    const RunResult r2 = run("estimate --input " + path + " --cols 2,3 --json");
    REQUIRE(r2.exit_code == 0);
    CHECK(json::parse(r2.output).at("phi_hat").get<double>() == -1.0);
}

TEST_CASE("estimate data errors exit 3") {
    const std::string ties = write_temp_csv("ties.csv", "1,1\n1,2\n2,3\n");
    CHECK(run("estimate --input " + ties + " --ties error").exit_code == 3);

    const std::string bad = write_temp_csv("bad.csv", "1,2\nfoo,bar\n");
    CHECK(run("estimate --input " + bad).exit_code == 3);

    const std::string  missing = "/tmp/wfootrule_does_not_exist.csv";
    CHECK(run("estimate --input " + missing).exit_code == 3);

    const std::string tiny = write_temp_csv("tiny.csv", "1,2\n");
    CHECK(run("estimate --input " + tiny).exit_code == 3);
}

TEST_CASE("test subcommand emits verdict fields") {
    const std::string path = write_temp_csv(
        "gauss.csv", [] {
            // Independent-ish pairs: rejection expected.
            std::ostringstream os;
            unsigned state = 12345;
            auto next = [&state]() {
                state = state * 1103515245u + 12345u;
                return (state >> 8) % 1000 / 1000.0;
            };
            for (int i = 0; i < 200; ++i) os << next() << ',' << next() << '\n';
            return os.str();
        }());
    const RunResult r = run("test --input " + path + " --alpha 0.05 --json");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.output);
    CHECK(j.at("reject").get<bool>());
    CHECK(j.at("p_value").get<double>() < 0.01);
    CHECK(j.at("t_stat").get<double>() > 0.0);
}

TEST_CASE("simulate produces the documented csv and honors manifests") {
    const std::string manifest = write_temp_csv("manifest.toml",
                                                "[[scenario]]\n"
                                                "family = \"m\"\n"
                                                "n = 100\n"
                                                "B = 5\n"
                                                "\n"
                                                "[[scenario]]\n"
                                                "family = \"frank\"\n"
                                                "param = -5\n"
                                                "n = 50\n"
                                                "B = 8\n");
    const std::string out = "/tmp/wfootrule_test_results.csv";
    const RunResult r =
        run("simulate --manifest " + manifest + " --jobs 2 --seed 7 --out " + out);
    REQUIRE(r.exit_code == 0);

    // stdout CSV re-parses under the schema; spot-check the deterministic row.
    std::istringstream in(r.output);
    std::string header, row1;
    std::getline(in, header);
    std::getline(in, row1);
    CHECK(header.rfind("family,param,n,truth_phi", 0) == 0);
    CHECK(row1.rfind("m,0,100,0.50000,1.00000,0.48515,-0.01485,0.00000,1.00000,", 0) == 0);

    // --out wrote the same CSV.
    std::ifstream file(out);
    std::string file_text((std::istreambuf_iterator<char>(file)),
                          std::istreambuf_iterator<char>());
    CHECK(file_text == r.output);

    // Markdown format.
    const RunResult md =
        run("simulate --manifest " + manifest + " --seed 7 --format md");
    REQUIRE(md.exit_code == 0);
    CHECK(md.output.find("| copula") == 0u);

    // Same seed, same numbers: determinism through the CLI.
    const RunResult again =
        run("simulate --manifest " + manifest + " --jobs 1 --seed 7");
    CHECK(again.output == r.output);

    // Decay report flag appends ratio lines.
    const RunResult rates =
        run("simulate --manifest " + manifest + " --seed 7 --rates");
    CHECK(rates.output.find("bias_ratio") != std::string::npos);
}

TEST_CASE("simulate seed resolution: flag beats environment beats default") {
    const std::string manifest = write_temp_csv("seedman.toml",
                                                "[[scenario]]\n"
                                                "family = \"frank\"\n"
                                                "param = -5\n"
                                                "n = 40\n"
                                                "B = 6\n");
    const RunResult env_run = run("simulate --manifest " + manifest +
                                  " --seed 99");
    setenv("WFOOTRULE_SEED", "99", 1);
    const RunResult env_only =
        run("simulate --manifest " + manifest);
    unsetenv("WFOOTRULE_SEED");
    CHECK(env_only.output == env_run.output);

    const RunResult def_run = run("simulate --manifest " + manifest);
    CHECK(def_run.output.find(",424242") != std::string::npos);
}

TEST_CASE("simulate rejects unsamplable or malformed manifests with exit 3") {
    const std::string bad = write_temp_csv("badman.toml", "[[scenario]]\nfamily = \"zeta\"\nn = 10\nB = 2\n");
    CHECK(run("simulate --manifest " + bad).exit_code == 3);
    CHECK(run("simulate --manifest /tmp/wfootrule_no_such_manifest.toml").exit_code == 3);
}

TEST_CASE("csv reader handles delimiters, headers and column selection") {
    {
        std::istringstream in("x;y\n1;2\n3;4\n");
        const wfoot::BivariateData d = wfoot::read_bivariate_csv(in, "");
        REQUIRE(d.x.size() == 2u);
        CHECK(d.x[0] == 1.0);
        CHECK(d.y[1] == 4.0);
    }
    {
        std::istringstream in("0.1 0.9\n0.4 0.6\n0.5 0.5\n");
        const wfoot::BivariateData d = wfoot::read_bivariate_csv(in, "");
        CHECK(d.x.size() == 3u);
    }
    {
        std::istringstream in("a,b,c\n1,2,3\n4,5,6\n");
        const wfoot::BivariateData d = wfoot::read_bivariate_csv(in, "c,a");
        CHECK(d.x[0] == 3.0);
        CHECK(d.y[0] == 1.0);
    }
    {
        std::istringstream in("a,b\n1,2\n");
        CHECK_THROWS_AS((void)wfoot::read_bivariate_csv(in, "a,zzz"), wfoot::DataError);
    }
    {
        std::istringstream in("1,2\n3\n");
        CHECK_THROWS_AS((void)wfoot::read_bivariate_csv(in, ""), wfoot::DataError);
    }
}
