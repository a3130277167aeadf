#include "ladderkit/serialize.hpp"

#include "ladderkit/errors.hpp"

namespace ladderkit {

namespace {

const json& require_key(const json& j, const char* key, const char* ctx) {
    auto it = j.find(key);
    if (it == j.end()) {
        std::string msg = "config: missing key '";
        msg += ctx;
        msg += key;
        msg += "'";
        throw DomainError(msg);
    }
    return *it;
}

} // namespace

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index jcol = 0; jcol < m.cols(); ++jcol)
            row.push_back(m(i, jcol));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty() || !j[0].is_array())
        throw DomainError("config: matrix must be a nonempty array of rows");
    const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
    const Eigen::Index cols = static_cast<Eigen::Index>(j[0].size());
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const json& row = j[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
            throw DomainError("config: matrix rows have inconsistent lengths");
        for (Eigen::Index c = 0; c < cols; ++c)
            m(i, c) = row[static_cast<std::size_t>(c)].get<double>();
    }
    return m;
}

json rowvector_to_json(const RowVector& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

RowVector rowvector_from_json(const json& j) {
    if (!j.is_array() || j.empty())
        throw DomainError("config: vector must be a nonempty array");
    RowVector v(static_cast<Eigen::Index>(j.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i)
        v(i) = j[static_cast<std::size_t>(i)].get<double>();
    return v;
}

json phasetype_to_json(const PhaseType& ph) {
    json j;
    j["alpha"] = rowvector_to_json(ph.alpha);
    j["T"] = matrix_to_json(ph.T);
    return j;
}

PhaseType phasetype_from_json(const json& j) {
    PhaseType ph;
    ph.alpha = rowvector_from_json(require_key(j, "alpha", ""));
    ph.T = matrix_from_json(require_key(j, "T", ""));
    if (ph.T.rows() != ph.T.cols())
        throw DomainError("config: phase generator T must be square");
    if (ph.alpha.size() != ph.T.rows())
        throw DomainError("config: alpha and T dimensions disagree");
    return ph;
}

json model_to_json(const PhLevyModel& model) {
    json minus;
    minus["drift"] = model.minus.drift;
    minus["sigma2"] = model.minus.sigma2;
    minus["downRate"] = model.minus.downRate;
    if (model.minus.downLaw)
        minus["downLaw"] = phasetype_to_json(*model.minus.downLaw);
    json j;
    j["minus"] = std::move(minus);
    j["upRate"] = model.upRate;
    if (model.upLaw) j["upLaw"] = phasetype_to_json(*model.upLaw);
    return j;
}

PhLevyModel model_from_json(const json& j) {
    PhLevyModel model;
    const json& minus = require_key(j, "minus", "");
    model.minus.drift = require_key(minus, "drift", "minus.").get<double>();
    model.minus.sigma2 = require_key(minus, "sigma2", "minus.").get<double>();
    model.minus.downRate = minus.value("downRate", 0.0);
    if (minus.contains("downLaw"))
        model.minus.downLaw = phasetype_from_json(minus["downLaw"]);
    if (model.minus.downRate > 0.0 && !model.minus.downLaw)
        throw DomainError("config: downRate > 0 requires minus.downLaw");
    if (model.minus.sigma2 < 0.0)
        throw DomainError("config: sigma2 must be nonnegative");
    if (model.minus.downRate < 0.0)
        throw DomainError("config: downRate must be nonnegative");
    model.upRate = j.value("upRate", 0.0);
    if (j.contains("upLaw")) model.upLaw = phasetype_from_json(j["upLaw"]);
    if (model.upRate > 0.0 && !model.upLaw)
        throw DomainError("config: upRate > 0 requires upLaw");
    if (model.upRate < 0.0)
        throw DomainError("config: upRate must be nonnegative");
    return model;
}

json solution_to_json(const LadderSolution& sol) {
    json j;
    j["killing"] = sol.killing;
    j["pathCase"] = sol.pathCase == PathClass::General
                        ? "general"
                        : "minusIsSubordinator";
    j["eta"] = rowvector_to_json(sol.eta);
    j["Qplus"] = matrix_to_json(sol.Qplus);
    j["iterations"] = sol.iterations;
    j["finalStep"] = sol.finalStep;
    j["residual"] = sol.residualValue;
    j["usedTilt"] = sol.usedTilt;
    j["newtonPolish"] = sol.newtonPolish;
    return j;
}

json atom_ph_to_json(const AtomPlusPhaseType& law) {
    json j;
    j["atom0"] = law.atom0;
    if (law.tail)
        j["tail"] = phasetype_to_json(*law.tail);
    else
        j["tail"] = nullptr;
    return j;
}

std::uint64_t fnv1a_digest(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char b : bytes) {
        h ^= static_cast<std::uint64_t>(b);
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace ladderkit
