#pragma once

#include <string>

#include <json.hpp>

#include "nilsum/matrix.hpp"
#include "nilsum/ring.hpp"
#include "nilsum/witness.hpp"

// Canonical JSON certificate encoding: rationals as {"num","den"} decimal
// strings, prime-field elements as integers, matrix-ring elements as nested
// arrays, Weyl elements as [a, b, "num/den"] triples sorted by (a, b).

namespace nilsum {

using json = nlohmann::json;

struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline json ring_spec_to_json(const RingSpec& s) {
    json j;
    j["kind"] = ring_kind_name(s.kind);
    if (s.kind == RingKind::PrimeField) j["p"] = s.p;
    if (s.kind == RingKind::MatrixRing) {
        j["m"] = s.m;
        j["base"] = ring_spec_to_json(s.base_spec());
    }
    return j;
}

inline RingSpec ring_spec_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind")) throw parse_error("ring spec: object with kind expected");
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "Rational") return RingSpec::rational();
    if (kind == "PrimeField") return RingSpec::prime_field(j.at("p").get<std::uint64_t>());
    if (kind == "MatrixRing")
        return RingSpec::matrix_ring(j.at("m").get<std::size_t>(),
                                     ring_spec_from_json(j.at("base")));
    if (kind == "Weyl") return RingSpec::weyl();
    throw parse_error("unknown ring kind: " + kind);
}

inline json element_to_json(const RingElement& e) {
    if (auto* q = std::get_if<mpq_class>(&e.v)) {
        json j;
        j["num"] = q->get_num().get_str();
        j["den"] = q->get_den().get_str();
        return j;
    }
    if (auto* f = std::get_if<FpElem>(&e.v)) return json(f->v);
    if (auto* m = std::get_if<MatrixElem>(&e.v)) {
        json rows = json::array();
        for (std::size_t i = 0; i < m->m; ++i) {
            json row = json::array();
            for (std::size_t j = 0; j < m->m; ++j)
                row.push_back(element_to_json(m->entries[i * m->m + j]));
            rows.push_back(row);
        }
        return rows;
    }
    const auto& w = std::get<WeylElem>(e.v);
    json terms = json::array();
    for (const auto& [k, c] : w.terms) {  // std::map iterates sorted by (a,b)
        std::string coeff = c.get_num().get_str() + "/" + c.get_den().get_str();
        terms.push_back(json::array({k.first, k.second, coeff}));
    }
    return terms;
}

inline RingElement element_from_json(const json& j, const RingSpec& spec) {
    try {
        switch (spec.kind) {
            case RingKind::Rational: {
                mpq_class q(mpz_class(j.at("num").get<std::string>()),
                            mpz_class(j.at("den").get<std::string>()));
                if (sgn(q.get_den()) <= 0) throw parse_error("rational: positive denominator required");
                q.canonicalize();
                return RingElement(q);
            }
            case RingKind::PrimeField: {
                std::uint64_t v = j.get<std::uint64_t>();
                return RingElement(FpElem{v % spec.p, spec.p});
            }
            case RingKind::MatrixRing: {
                MatrixElem m;
                m.m = spec.m;
                if (!j.is_array() || j.size() != spec.m)
                    throw parse_error("matrix element: wrong row count");
                for (const auto& row : j) {
                    if (!row.is_array() || row.size() != spec.m)
                        throw parse_error("matrix element: wrong column count");
                    for (const auto& x : row)
                        m.entries.push_back(element_from_json(x, spec.base_spec()));
                }
                return RingElement(std::move(m));
            }
            case RingKind::Weyl: {
                WeylElem w;
                for (const auto& t : j) {
                    unsigned long a = t.at(0).get<unsigned long>();
                    unsigned long b = t.at(1).get<unsigned long>();
                    std::string s = t.at(2).get<std::string>();
                    mpq_class c(s);
                    c.canonicalize();
                    detail::weyl_insert(w, a, b, c);
                }
                return RingElement(std::move(w));
            }
        }
    } catch (const json::exception& ex) {
        throw parse_error(std::string("element parse: ") + ex.what());
    }
    throw parse_error("bad ring kind");
}

inline json matrix_to_json(const Matrix& a) {
    json j;
    j["ring"] = ring_spec_to_json(a.ring);
    j["n"] = a.n;
    json rows = json::array();
    for (std::size_t i = 0; i < a.n; ++i) {
        json row = json::array();
        for (std::size_t c = 0; c < a.n; ++c) row.push_back(element_to_json(a.at(i, c)));
        rows.push_back(row);
    }
    j["entries"] = rows;
    return j;
}

inline Matrix matrix_from_json(const json& j) {
    try {
        RingSpec spec = ring_spec_from_json(j.at("ring"));
        std::size_t n = j.at("n").get<std::size_t>();
        Matrix out(spec, n);
        const auto& rows = j.at("entries");
        if (!rows.is_array() || rows.size() != n) throw parse_error("matrix: wrong row count");
        for (std::size_t i = 0; i < n; ++i) {
            const auto& row = rows[i];
            if (!row.is_array() || row.size() != n) throw parse_error("matrix: wrong column count");
            for (std::size_t c = 0; c < n; ++c) out.at(i, c) = element_from_json(row[c], spec);
        }
        return out;
    } catch (const json::exception& ex) {
        throw parse_error(std::string("matrix parse: ") + ex.what());
    }
}

inline json witness_to_json(const CommutatorWitness& w) {
    json j;
    json pairs = json::array();
    for (const auto& [x, y] : w.pairs)
        pairs.push_back(json::array({element_to_json(x), element_to_json(y)}));
    j["pairs"] = pairs;
    j["target"] = element_to_json(w.target);
    j["seed"] = w.seed;
    return j;
}

inline CommutatorWitness witness_from_json(const json& j, const RingSpec& spec) {
    try {
        CommutatorWitness w;
        w.target = element_from_json(j.at("target"), spec);
        w.seed = j.value("seed", std::uint64_t{0});
        for (const auto& p : j.at("pairs"))
            w.pairs.emplace_back(element_from_json(p.at(0), spec),
                                 element_from_json(p.at(1), spec));
        return w;
    } catch (const json::exception& ex) {
        throw parse_error(std::string("witness parse: ") + ex.what());
    }
}

}  // namespace nilsum
