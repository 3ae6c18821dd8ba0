// nilsum: constructive matrix decompositions with verifiable certificates.
//
// Every decomposition command writes a certificate, re-reads it from disk and
// re-verifies it with the independent checker; exit 0 means the verifier
// passed. Exit 1: verification failed. Exit 2: parse/config error. Exit 3:
// infeasible (e.g. trace obstruction).

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nilsum/nilsum.hpp"

using namespace nilsum;

namespace {

RingSpec parse_ring(const std::string& s) {
    if (s == "Q") return RingSpec::rational();
    if (s == "Weyl") return RingSpec::weyl();
    if (s.size() > 1 && (s[0] == 'F')) {
        std::size_t off = s[1] == '_' ? 2 : 1;
        return RingSpec::prime_field(std::stoull(s.substr(off)));
    }
    if (s.rfind("M(", 0) == 0 && s.back() == ')') {
        auto comma = s.find(',');
        if (comma == std::string::npos) throw parse_error("ring: M(m,base) expected");
        std::size_t m = std::stoul(s.substr(2, comma - 2));
        return RingSpec::matrix_ring(m, parse_ring(s.substr(comma + 1, s.size() - comma - 2)));
    }
    throw parse_error("unknown ring: " + s + " (expected Q, F<p>, M(m,base), Weyl)");
}

// shorthand: "X3" = X^3; "X3-1" = X^3 - 1 where its roots exist; "a:b:c" =
// (X-a)(X-b)(X-c) with integer (central) roots
PolySpec parse_poly(const std::string& tok, const RingSpec& spec) {
    if (tok == "X3") return PolySpec::cubed(spec);
    if (tok == "X3-1") {
        RingSpec base = spec.kind == RingKind::MatrixRing ? spec.base_spec() : spec;
        if (base.kind != RingKind::PrimeField || base.p % 3 != 1)
            throw parse_error("X3-1 needs all three cube roots of unity (F_p with p = 1 mod 3)");
        std::uint64_t p = base.p, w = 0;
        for (std::uint64_t a = 2; a < p; ++a) {
            // a^((p-1)/3) has order dividing 3; take the first nontrivial one
            std::uint64_t r = 1, b = a, e = (p - 1) / 3;
            while (e) {
                if (e & 1) r = (unsigned __int128)r * b % p;
                b = (unsigned __int128)b * b % p;
                e >>= 1;
            }
            if (r != 1) {
                w = r;
                break;
            }
        }
        return PolySpec{{central_from_int(spec, 1), central_from_int(spec, (long)w),
                         central_from_int(spec, (long)((unsigned __int128)w * w % p))}};
    }
    std::array<long, 3> roots{};
    std::istringstream in(tok);
    std::string part;
    for (auto& r : roots) {
        if (!std::getline(in, part, ':')) throw parse_error("poly: three roots expected: " + tok);
        r = std::stol(part);
    }
    return PolySpec{{central_from_int(spec, roots[0]), central_from_int(spec, roots[1]),
                     central_from_int(spec, roots[2])}};
}

std::vector<PolySpec> parse_polys(const std::string& s, const RingSpec& spec) {
    std::vector<PolySpec> out;
    std::istringstream in(s);
    std::string tok;
    while (std::getline(in, tok, ',')) out.push_back(parse_poly(tok, spec));
    return out;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& ex) {
        throw parse_error(std::string("json parse: ") + ex.what());
    }
    return j;
}

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw parse_error("cannot write " + path);
    out << j.dump(2) << "\n";
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv("NILSUM_SEED")) return std::stoull(env);
    return 0;
}

struct Job {
    std::string input, output = "cert.json", ring, polys, witness_path;
    std::size_t k = 1;
    std::uint64_t seed = default_seed();
};

CommutatorWitness job_witness(const Job& job, const RingElement& target, std::size_t k) {
    if (!job.witness_path.empty()) {
        auto w = witness_from_json(read_json_file(job.witness_path), spec_of(target));
        if (!witness_check(w) || !ring_eq(w.target, target))
            throw parse_error("supplied witness does not certify the required target");
        return w;
    }
    Rng rng(job.seed);
    return split_k_commutators(target, k, rng);
}

// write, re-read, verify independently, report
int finish(const Job& job, const Decomposition& d, const Matrix& original) {
    write_json_file(job.output, certificate_to_json(d));
    Decomposition reread = certificate_from_json(read_json_file(job.output));
    auto rep = verify_certificate(reread, original);
    std::ostringstream claims;
    for (std::size_t i = 0; i < rep.per_term.size(); ++i)
        claims << (i ? "," : "") << rep.per_term[i].claim;
    std::cout << d.lemma << ": " << d.terms.size() << " terms [" << claims.str() << "] -> "
              << job.output << " verification " << (rep.overall ? "PASS" : "FAIL") << "\n";
    return rep.overall ? 0 : 1;
}

int run_decompose3(const Job& job) {
    Matrix A = matrix_from_json(read_json_file(job.input));
    DiagonalTargets targets = DiagonalTargets::zeros(A.ring);
    if (!job.polys.empty()) {
        auto ps = parse_polys(job.polys, A.ring);
        if (ps.size() != 3) throw parse_error("decompose3: three target rows expected");
        for (std::size_t i = 0; i < 3; ++i) targets.rows[i] = ps[i].roots;
    }
    RingElement shift = ring_zero(A.ring);
    for (const auto& row : targets.rows)
        for (const auto& r : row) shift = ring_add(shift, r);
    auto w = job_witness(job, ring_sub(trace(A), shift), job.k);
    return finish(job, corollary_decompose(A, targets, w), A);
}

int run_polysum3(const Job& job) {
    Matrix A = matrix_from_json(read_json_file(job.input));
    auto ps = parse_polys(job.polys, A.ring);
    if (ps.size() != 3) throw parse_error("polysum3: three polynomials expected");
    RingElement shift = ring_zero(A.ring);
    for (const auto& p : ps)
        for (const auto& r : p.roots) shift = ring_add(shift, r);
    auto w = job_witness(job, ring_sub(trace(A), shift), job.k);
    return finish(job, poly_sum_3(A, ps[0], ps[1], ps[2], w), A);
}

int run_polysum4(const Job& job) {
    Matrix A = matrix_from_json(read_json_file(job.input));
    auto ps = parse_polys(job.polys, A.ring);
    if (ps.size() != 4) throw parse_error("polysum4: four polynomials expected");
    return finish(job, poly_sum_4(A, {ps[0], ps[1], ps[2], ps[3]}), A);
}

int run_subrings(const Job& job, bool truss) {
    Matrix A = matrix_from_json(read_json_file(job.input));
    if (A.ring.kind != RingKind::Weyl)
        throw infeasible_error("the subring/truss decompositions need the ad_d oracle (ring Weyl)");
    auto oracle = weyl_oracle();
    return finish(job, truss ? truss_witness(A, oracle) : three_nilpotent_subrings(A, oracle), A);
}

int run_nsum(const Job& job, bool squarezero) {
    Matrix A = matrix_from_json(read_json_file(job.input));
    auto w = job_witness(job, trace(A), job.k);
    return finish(job, squarezero ? squarezero_sum(A, w) : nilpotent_sum(A, w), A);
}

int run_verify(const Job& job, const std::string& report_path) {
    Decomposition d = certificate_from_json(read_json_file(job.input));
    auto rep = verify_certificate(d);
    if (!report_path.empty()) write_json_file(report_path, report_to_json(rep));
    std::cout << "verify: " << d.terms.size() << " terms, sum " << (rep.sum_ok ? "ok" : "BAD")
              << ", claims " << (rep.counts_ok ? "" : "(count BAD) ")
              << (rep.overall ? "PASS" : "FAIL") << "\n";
    return rep.overall ? 0 : 1;
}

int run_selftest(std::size_t count, std::size_t max_n, std::uint64_t seed) {
    bool all = true;
    auto report = [&](const std::string& name, bool ok) {
        all &= ok;
        std::cout << (ok ? "PASS " : "FAIL ") << name << "\n";
    };
    Rng rng(seed);

    bool ok = true;
    for (std::size_t i = 0; i < count; ++i) {
        for (const auto& spec : {RingSpec::rational(), RingSpec::prime_field(13)}) {
            std::size_t n = 3 + rng.below(max_n - 2);
            std::size_t k = 1 + rng.below(3);
            auto A = random_trace_zero_matrix(spec, n, rng);
            auto d = nilpotent_sum(A, split_k_commutators(ring_zero(spec), k, rng));
            ok &= d.terms.size() == floor_log2(n) + k + 2 && verify_certificate(d).overall;
        }
    }
    report("nilpotent_sum count and verification", ok);

    ok = true;
    for (std::size_t i = 0; i < count; ++i) {
        auto spec = i % 2 ? RingSpec::prime_field(13) : RingSpec::rational();
        std::size_t n = 2 + rng.below(max_n - 1);
        std::size_t k = 1 + rng.below(3);
        auto A = random_trace_zero_matrix(spec, n, rng);
        auto d = squarezero_sum(A, split_k_commutators(ring_zero(spec), k, rng));
        ok &= d.terms.size() == floor_log2(n) + 2 * k + 2 * (n - 1) &&
              verify_certificate(d).overall;
        for (const auto& t : d.terms) ok &= mat_is_zero(mat_pow(t, 2));
    }
    report("squarezero_sum: every term squares to zero", ok);

    ok = true;
    auto f7 = RingSpec::prime_field(7);
    auto p7 = parse_poly("X3-1", f7);
    for (std::size_t i = 0; i < count; ++i) {
        auto A = random_trace_zero_matrix(f7, 3, rng);
        auto d = poly_sum_3(A, p7, p7, p7, CommutatorWitness::trivial(f7));
        ok &= verify_certificate(d).overall;
        for (const auto& t : d.terms) ok &= mat_pow(t, 3) == Matrix::identity(f7, 3);
    }
    report("polysum3 over F_7, order-3 terms", ok);

    ok = true;
    auto m2 = RingSpec::matrix_ring(2, RingSpec::rational());
    std::array<PolySpec, 4> cubes{PolySpec::cubed(m2), PolySpec::cubed(m2),
                                  PolySpec::cubed(m2), PolySpec::cubed(m2)};
    for (std::size_t i = 0; i < count; ++i) {
        auto A = random_matrix(m2, 3, rng);
        auto blk = matrix_from_element(A.at(2, 2));
        blk.at(1, 1) = ring_sub(blk.at(1, 1), trace(flatten(A)));
        A.at(2, 2) = element_from_matrix(blk);
        ok &= verify_certificate(poly_sum_4(A, cubes)).overall;
    }
    try {
        (void)poly_sum_4(Matrix::identity(m2, 3), cubes);
        ok = false;
    } catch (const infeasible_error&) {
    }
    report("polysum4 over M_2(Q) with feasibility gate", ok);

    ok = true;
    RandomOpts wo;
    wo.weyl_max_deg = 3;
    wo.weyl_terms = 2;
    auto oracle = weyl_oracle();
    for (std::size_t i = 0; i < count; ++i) {
        auto A = random_matrix(RingSpec::weyl(), 3, rng, wo);
        ok &= verify_certificate(three_nilpotent_subrings(A, oracle)).overall;
        auto t = truss_witness(A, oracle);
        ok &= check_truss_identity(t.terms[0], t.terms[1], t.terms[2], A);
    }
    report("Weyl subrings and truss identity", ok);

    ok = true;
    for (std::size_t n = 1; n <= (std::size_t{1} << 20); ++n) {
        auto back = nk_sequence(n).back();
        ok &= back == ((n & (n - 1)) == 0 ? 1u : 2u);
        if (!ok) break;
    }
    report("nk_sequence closed form up to 2^20", ok);

    // byte determinism: same input and seed, twice
    auto spec = RingSpec::rational();
    Rng ra(seed + 1), rb(seed + 1);
    auto Aa = random_trace_zero_matrix(spec, 6, ra);
    auto Ab = random_trace_zero_matrix(spec, 6, rb);
    auto da = nilpotent_sum(Aa, split_k_commutators(ring_zero(spec), 2, ra));
    auto db = nilpotent_sum(Ab, split_k_commutators(ring_zero(spec), 2, rb));
    report("byte-identical certificates for identical (input, seed)",
           certificate_to_json(da).dump() == certificate_to_json(db).dump());

    return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact constructive matrix decompositions with verifiable certificates"};
    app.require_subcommand(1);

    Job job;
    std::size_t st_count = 5, st_max_n = 16;
    std::uint64_t st_seed = default_seed();

    auto add_common = [&](CLI::App* cmd, bool needs_out = true) {
        cmd->add_option("input", job.input, "input JSON file")->required();
        if (needs_out) cmd->add_option("--out", job.output, "certificate output path");
        cmd->add_option("--seed", job.seed, "witness RNG seed (default: NILSUM_SEED or 0)");
        cmd->add_option("--ring", job.ring, "ring cross-check: Q, F<p>, M(m,base), Weyl");
    };

    auto* c3 = app.add_subcommand("decompose3", "3x3 sum with prescribed diagonals");
    add_common(c3);
    c3->add_option("--polys", job.polys, "three diagonal-target rows, e.g. 0:0:0,1:2:3,0:0:0");
    c3->add_option("--witness", job.witness_path, "witness JSON for the diagonal sum");
    c3->add_option("--k", job.k, "commutator count for the auto-derived witness");

    auto* p3 = app.add_subcommand("polysum3", "three polynomial-annihilated terms");
    add_common(p3);
    p3->add_option("--polys", job.polys, "p1,p2,p3 (X3, X3-1 or a:b:c)")->required();
    p3->add_option("--witness", job.witness_path, "witness JSON");
    p3->add_option("--k", job.k, "commutator count for the auto-derived witness");

    auto* p4 = app.add_subcommand("polysum4", "four polynomial-annihilated terms over M_m");
    add_common(p4);
    p4->add_option("--polys", job.polys, "p1,p2,p3,p4")->required();

    auto* sr = app.add_subcommand("subrings", "three-nilpotent-subring membership (Weyl)");
    add_common(sr);
    auto* tr = app.add_subcommand("truss", "unipotent heap witness k - l + m = A (Weyl)");
    add_common(tr);

    auto* ns = app.add_subcommand("nilpotentsum", "floor(log2 n) + k + 2 nilpotent terms");
    add_common(ns);
    ns->add_option("--k", job.k, "commutator count");
    ns->add_option("--witness", job.witness_path, "witness JSON for Tr(A)");

    auto* ss = app.add_subcommand("squarezerosum", "all-square-zero variant");
    add_common(ss);
    ss->add_option("--k", job.k, "commutator count");
    ss->add_option("--witness", job.witness_path, "witness JSON for Tr(A)");

    auto* ve = app.add_subcommand("verify", "independently verify a certificate");
    std::string report_path;
    ve->add_option("input", job.input, "certificate JSON")->required();
    ve->add_option("--out", report_path, "write the report JSON here");

    auto* st = app.add_subcommand("selftest", "randomized property suite");
    st->add_option("--count", st_count, "iterations per property");
    st->add_option("--max-n", st_max_n, "matrix size cap");
    st->add_option("--seed", st_seed, "RNG seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (!job.ring.empty() && !job.input.empty() && app.get_subcommands()[0] != st) {
            // optional cross-check of the declared ring against the input file
            auto declared = parse_ring(job.ring);
            auto actual = matrix_from_json(read_json_file(job.input)).ring;
            if (!(declared == actual))
                throw parse_error("--ring does not match the ring of the input matrix");
        }
        if (c3->parsed()) return run_decompose3(job);
        if (p3->parsed()) return run_polysum3(job);
        if (p4->parsed()) return run_polysum4(job);
        if (sr->parsed()) return run_subrings(job, false);
        if (tr->parsed()) return run_subrings(job, true);
        if (ns->parsed()) return run_nsum(job, false);
        if (ss->parsed()) return run_nsum(job, true);
        if (ve->parsed()) return run_verify(job, report_path);
        if (st->parsed()) return run_selftest(st_count, st_max_n, st_seed);
    } catch (const infeasible_error& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return 3;
    } catch (const parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
