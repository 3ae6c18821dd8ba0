#pragma once

#include <string>

#include "nilsum/decomposition.hpp"
#include "nilsum/json.hpp"
#include "nilsum/verify.hpp"

// Certificate JSON: {"input", "terms", "claims", "witness", "lemma", ...},
// extended with "reduction" and "count_formula" for the n x n pipeline.

namespace nilsum {

inline json poly_to_json(const PolySpec& p) {
    json roots = json::array();
    for (const auto& r : p.roots) roots.push_back(element_to_json(r));
    return json{{"roots", roots}};
}

inline PolySpec poly_from_json(const json& j, const RingSpec& spec) {
    PolySpec p;
    const auto& roots = j.at("roots");
    if (!roots.is_array() || roots.size() != 3) throw parse_error("poly: three roots expected");
    for (std::size_t i = 0; i < 3; ++i) p.roots[i] = element_from_json(roots[i], spec);
    return p;
}

inline json claim_to_json(const Claim& c) {
    json j;
    j["type"] = claim_name(c.kind);
    if (c.kind == Claim::Kind::NilpotentIndex || c.kind == Claim::Kind::Unipotent)
        j["e"] = c.index;
    if (c.kind == Claim::Kind::AnnihilatedBy) j["poly"] = poly_to_json(*c.poly);
    if (c.kind == Claim::Kind::ConjugatedStrictUpper) {
        j["U"] = matrix_to_json(*c.U);
        j["U_inv"] = matrix_to_json(*c.U_inv);
    }
    return j;
}

inline Claim claim_from_json(const json& j, const RingSpec& spec) {
    std::string type = j.at("type").get<std::string>();
    if (type == "none") return Claim::none();
    if (type == "nilpotent_index") return Claim::nilpotent(j.at("e").get<unsigned>());
    if (type == "unipotent") return Claim::unipotent(j.at("e").get<unsigned>());
    if (type == "annihilated_by") return Claim::annihilated(poly_from_json(j.at("poly"), spec));
    if (type == "strict_upper") return Claim::strict_upper();
    if (type == "strict_lower") return Claim::strict_lower();
    if (type == "conjugated_strict_upper")
        return Claim::conjugated_strict_upper(matrix_from_json(j.at("U")),
                                              matrix_from_json(j.at("U_inv")));
    throw parse_error("unknown claim type: " + type);
}

inline json reduction_to_json(const ReductionTrace& rt) {
    json j;
    j["sequence"] = rt.sequence;
    json stages = json::array();
    for (const auto& st : rt.stages)
        stages.push_back(json{{"squarezero", matrix_to_json(st.squarezero)},
                              {"upper", matrix_to_json(st.upper)},
                              {"lower", matrix_to_json(st.lower)}});
    j["stages"] = stages;
    j["residual"] = json{{"v", rt.v}, {"D", matrix_to_json(rt.residual)}};
    return j;
}

inline ReductionTrace reduction_from_json(const json& j) {
    ReductionTrace rt;
    rt.sequence = j.at("sequence").get<std::vector<std::size_t>>();
    for (const auto& st : j.at("stages"))
        rt.stages.push_back({matrix_from_json(st.at("squarezero")),
                             matrix_from_json(st.at("upper")),
                             matrix_from_json(st.at("lower"))});
    rt.v = j.at("residual").at("v").get<std::size_t>();
    rt.residual = matrix_from_json(j.at("residual").at("D"));
    return rt;
}

inline json certificate_to_json(const Decomposition& d) {
    json j;
    j["input"] = matrix_to_json(d.input);
    json terms = json::array();
    for (const auto& t : d.terms) terms.push_back(matrix_to_json(t));
    j["terms"] = terms;
    json claims = json::array();
    for (const auto& c : d.claims) claims.push_back(claim_to_json(c));
    j["claims"] = claims;
    j["witness"] = witness_to_json(d.witness);
    j["lemma"] = d.lemma;
    j["seed"] = d.seed;
    if (d.lemma == "3.9" || d.lemma == "remark") {
        j["count_formula"] = json{{"log2", floor_log2(d.input.n)}, {"k", d.k}, {"extra", 2}};
        if (d.reduction) j["reduction"] = reduction_to_json(*d.reduction);
    }
    return j;
}

inline Decomposition certificate_from_json(const json& j) {
    try {
        Decomposition d;
        d.input = matrix_from_json(j.at("input"));
        for (const auto& t : j.at("terms")) d.terms.push_back(matrix_from_json(t));
        for (const auto& c : j.at("claims")) d.claims.push_back(claim_from_json(c, d.input.ring));
        d.witness = witness_from_json(j.at("witness"), d.input.ring);
        d.lemma = j.at("lemma").get<std::string>();
        d.seed = j.value("seed", std::uint64_t{0});
        if (j.contains("count_formula")) d.k = j.at("count_formula").at("k").get<std::size_t>();
        if (j.contains("reduction")) d.reduction = reduction_from_json(j.at("reduction"));
        return d;
    } catch (const json::exception& ex) {
        throw parse_error(std::string("certificate parse: ") + ex.what());
    }
}

inline json report_to_json(const VerificationReport& rep) {
    json j;
    j["sum_ok"] = rep.sum_ok;
    json per_term = json::array();
    for (const auto& tr : rep.per_term) {
        json t{{"claim", tr.claim}, {"pass", tr.pass}};
        if (!tr.note.empty()) t["note"] = tr.note;
        per_term.push_back(t);
    }
    j["per_term"] = per_term;
    j["counts_ok"] = rep.counts_ok;
    j["witness_ok"] = rep.witness_ok;
    j["overall"] = rep.overall;
    return j;
}

}  // namespace nilsum
