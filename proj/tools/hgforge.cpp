// SPDX-License-Identifier: MIT
// hgforge: batch verification driver and evaluator.
// Exit codes: 0 all checks pass, 1 a check fails or evaluation fails, 2 usage error.

#include "hgforge/hgforge.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace
{

using real = long double;
using cx = hgforge::cplx<real>;

constexpr int exit_fail = 1;
constexpr int exit_usage = 2;

struct usage_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

cx to_cx(const std::string &s)
{
    try {
        const auto z = hgforge::parse_complex(s);
        return {real(z.real()), real(z.imag())};
    } catch (const std::invalid_argument &ex) {
        throw usage_error(ex.what());
    }
}

nlohmann::json cx_json(const cx &z)
{
    return hgforge::complex_to_json(z);
}

// Exponents from a parameter file or sampled from (m, seed).
struct param_source {
    std::string file;
    int m = 3;
    std::uint64_t seed = 1;

    hgforge::exponent_set<real> load() const
    {
        if (file.empty()) {
            return hgforge::sample_parameters<real>(m, seed);
        }
        std::ifstream in(file);
        if (!in) {
            throw usage_error("cannot open parameter file: " + file);
        }
        nlohmann::json j;
        try {
            in >> j;
            return hgforge::exponent_set_from_json<real>(j);
        } catch (const std::exception &ex) {
            throw usage_error(std::string("bad parameter file: ") + ex.what());
        }
    }
};

void add_param_options(CLI::App *app, param_source &src)
{
    app->add_option("--params", src.file, "parameter file (JSON); default samples from --m/--seed")->check(CLI::ExistingFile);
    app->add_option("--m", src.m, "order when sampling")->check(CLI::Range(1, 6));
    app->add_option("--seed", src.seed, "seed when sampling");
}

int write_report(const hgforge::report &r, const std::string &json_path)
{
    std::cout << hgforge::report_to_text(r);
    if (!json_path.empty()) {
        std::ofstream out(json_path);
        if (!out) {
            std::cerr << "hgforge: cannot write " << json_path << '\n';
            return exit_fail;
        }
        out << hgforge::report_to_json(r).dump(2) << '\n';
    }
    return r.failed() == 0 ? 0 : exit_fail;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"hgforge: numerical verification of hypergeometric, Cauchy and elliptic identities"};
    app.require_subcommand(1);

    // verify
    auto *verify = app.add_subcommand("verify", "run a verification suite");
    std::string suite;
    hgforge::suite_config cfg;
    std::string omega2_s, kind_s, json_path;
    double tol = 0;
    int trunc = 0;
    bool no_accel = false;
    verify->add_option("suite", suite, "params|identities|residue|flows|cauchy|elliptic|series|monodromy|fock|cm|all")->required();
    verify->add_option("--m", cfg.m, "order m")->check(CLI::Range(1, 6));
    verify->add_option("--trials", cfg.trials, "trials per suite")->check(CLI::PositiveNumber);
    verify->add_option("--seed", cfg.seed, "master seed");
    auto *tol_opt = verify->add_option("--tol", tol, "replace every nonzero tolerance")->check(CLI::PositiveNumber);
    auto *omega_opt = verify->add_option("--omega2", omega2_s, "second period RE,IM (omega1 = 1)");
    auto *trunc_opt = verify->add_option("--trunc", trunc, "inner lattice radius")->check(CLI::Range(30, 1000000));
    auto *kind_opt = verify->add_option("--kind", kind_s, "Cauchy kind for the cauchy suite")
                         ->check(CLI::IsMember({"rational", "trig", "elliptic"}));
    verify->add_option("--json", json_path, "write the JSON report here");
    verify->add_flag("--no-accel", no_accel, "disable series acceleration (bit-stable baselines)");

    // eval
    auto *eval = app.add_subcommand("eval", "evaluate a single function");
    eval->require_subcommand(1);
    auto *pfq = eval->add_subcommand("pfq", "partial sum of pFq");
    std::vector<std::string> num_s, den_s;
    std::string z_s = "0.5,0";
    int terms = 200;
    pfq->add_option("--num", num_s, "numerator parameter RE,IM (repeatable)")->required();
    pfq->add_option("--den", den_s, "denominator parameter RE,IM (repeatable)");
    pfq->add_option("--z", z_s, "argument RE,IM")->required();
    pfq->add_option("--terms", terms, "number of terms")->check(CLI::PositiveNumber);

    auto *frob = eval->add_subcommand("frobenius", "Frobenius solution of the system (a2 set to 0)");
    std::string point_s = "0";
    int index = 1;
    param_source src;
    std::string fz_s;
    int fterms = 120;
    frob->add_option("--point", point_s, "base point")->check(CLI::IsMember({"0", "inf"}));
    frob->add_option("--i", index, "solution index, 1-based")->check(CLI::PositiveNumber);
    frob->add_option("--z", fz_s, "argument RE,IM")->required();
    frob->add_option("--terms", fterms, "number of series terms")->check(CLI::PositiveNumber);
    add_param_options(frob, src);

    auto *isn = eval->add_subcommand("inv-sn", "1/sn by the csc series or the lattice sum");
    std::string sz_s, sw_s = "0,0.8";
    int strunc = 400;
    bool lattice_sum = false;
    isn->add_option("--z", sz_s, "argument RE,IM")->required();
    isn->add_option("--omega2", sw_s, "second period RE,IM (omega1 = 1)");
    isn->add_option("--trunc", strunc, "inner lattice radius")->check(CLI::Range(30, 1000000));
    isn->add_flag("--lattice-sum", lattice_sum, "use the alternating lattice sum");

    // sample-params
    auto *sample = app.add_subcommand("sample-params", "print a sampled parameter file");
    int sm = 3;
    std::uint64_t sseed = 1;
    bool complex_mode = false;
    sample->add_option("--m", sm, "order m")->required()->check(CLI::Range(1, 6));
    sample->add_option("--seed", sseed, "seed")->required();
    sample->add_flag("--complex", complex_mode, "complex exponents");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_usage;
    }

    try {
        if (*verify) {
            if (!hgforge::is_suite_name(suite)) {
                throw usage_error("unknown suite: " + suite);
            }
            cfg.suite = suite;
            if (*tol_opt) {
                cfg.tol = tol;
            }
            if (*omega_opt) {
                const cx w = to_cx(omega2_s);
                cfg.omega2 = hgforge::cplx<double>(double(w.real()), double(w.imag()));
            }
            if (*trunc_opt) {
                cfg.trunc = trunc;
            }
            if (*kind_opt) {
                cfg.kind = hgforge::parse_cauchy_flavor(kind_s);
            }
            cfg.accelerate = !no_accel;
            try {
                hgforge::validate_config(cfg);
            } catch (const std::invalid_argument &ex) {
                throw usage_error(ex.what());
            }
            return write_report(hgforge::run_suite(cfg), json_path);
        }
        if (*pfq) {
            std::vector<cx> num, den;
            for (const auto &s : num_s) {
                num.push_back(to_cx(s));
            }
            for (const auto &s : den_s) {
                den.push_back(to_cx(s));
            }
            const auto v = hgforge::hyper_pfq(num, den, to_cx(z_s), terms);
            std::cout << nlohmann::json{{"value", cx_json(v.value)}, {"next_term", cx_json(v.next_term)}}.dump() << '\n';
            return 0;
        }
        if (*frob) {
            const auto e = hgforge::with_a2_zero(src.load());
            if (index > e.m) {
                throw usage_error("--i exceeds m");
            }
            const auto p = point_s == "0" ? hgforge::base_point::zero : hgforge::base_point::infinity;
            const auto t = hgforge::build_residue_triple(e);
            const auto s = hgforge::mhgs_frobenius(e, t, p, index - 1, fterms);
            const cx z = to_cx(fz_s);
            nlohmann::json vec = nlohmann::json::array();
            const auto v = s.evaluate(z);
            for (Eigen::Index k = 0; k < v.size(); ++k) {
                vec.push_back(cx_json(v(k)));
            }
            std::cout << nlohmann::json{{"point", point_s},
                                        {"i", index},
                                        {"exponent", cx_json(s.exponent)},
                                        {"z", cx_json(z)},
                                        {"value", vec},
                                        {"system_residual", static_cast<double>(hgforge::mhgs_residual(s, t, z))},
                                        {"closed_form_residual", static_cast<double>(s.closed_form_residual)},
                                        {"exponents", hgforge::exponent_set_to_json(e)}}
                             .dump()
                      << '\n';
            return 0;
        }
        if (*isn) {
            hgforge::lattice_spec<real> l;
            l.omega2 = to_cx(sw_s);
            l.n1 = strunc;
            try {
                l.validate();
            } catch (const std::invalid_argument &ex) {
                throw usage_error(ex.what());
            }
            const cx z = to_cx(sz_s);
            const auto v = lattice_sum ? hgforge::inv_sn_lattice(z, l) : hgforge::inv_sn(z, l);
            std::cout << nlohmann::json{{"value", cx_json(v.value)},
                                        {"tail_bound", static_cast<double>(v.tail_bound)},
                                        {"route", lattice_sum ? "lattice-sum" : "csc-series"}}
                             .dump()
                      << '\n';
            return 0;
        }
        if (*sample) {
            const auto e = hgforge::sample_parameters<real>(
                sm, sseed, complex_mode ? hgforge::sample_mode::complex : hgforge::sample_mode::real01);
            std::cout << hgforge::exponent_set_to_json(e).dump(2) << '\n';
            return 0;
        }
    } catch (const usage_error &ex) {
        std::cerr << "hgforge: " << ex.what() << '\n';
        return exit_usage;
    } catch (const std::exception &ex) {
        std::cerr << "hgforge: " << ex.what() << '\n';
        return exit_fail;
    }
    return exit_usage;
}
