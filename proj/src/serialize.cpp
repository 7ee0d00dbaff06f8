#include "ssa/serialize.hpp"

namespace ssa {

Json matrix_to_json(const Matrix<double>& m) {
    Json rows = Json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix<double> matrix_from_json(const Json& j) {
    if (!j.is_array()) throw ParseError("matrix must be an array of rows");
    const auto rows = static_cast<Index>(j.size());
    const auto cols = rows ? static_cast<Index>(j.front().size()) : Index(0);
    Matrix<double> m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        const auto& row = j[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Index>(row.size()) != cols) throw ParseError("ragged matrix rows");
        for (Index c = 0; c < cols; ++c) m(i, c) = row[static_cast<std::size_t>(c)].get<double>();
    }
    return m;
}

Json to_json(const NonstatMatrix& m) {
    Json j;
    j["kind"] = to_string(m.kind);
    if (m.kind == NonstatKind::Cor) j["tau"] = m.tau;
    const Index p = m.matrix.rows();
    j["p"] = p;
    Json values = Json::array();
    for (Index r = 0; r < p; ++r)
        for (Index c = 0; c < p; ++c) values.push_back(m.matrix(r, c));
    j["values"] = std::move(values);
    j["breakpoints"] = m.breakpoints;
    return j;
}

NonstatMatrix nonstat_from_json(const Json& j) {
    try {
        NonstatMatrix m;
        const auto kind = j.at("kind").get<std::string>();
        if (kind == "mean")
            m.kind = NonstatKind::Mean;
        else if (kind == "var")
            m.kind = NonstatKind::Var;
        else if (kind == "cor")
            m.kind = NonstatKind::Cor;
        else if (kind == "assa")
            m.kind = NonstatKind::Assa;
        else
            throw ParseError("unknown matrix kind '" + kind + "'");
        if (m.kind == NonstatKind::Cor) m.tau = j.at("tau").get<Index>();
        const auto p = j.at("p").get<Index>();
        const auto& values = j.at("values");
        if (static_cast<Index>(values.size()) != p * p) throw ParseError("values must hold p*p entries");
        m.matrix.resize(p, p);
        for (Index r = 0; r < p; ++r)
            for (Index c = 0; c < p; ++c) m.matrix(r, c) = values[static_cast<std::size_t>(r * p + c)].get<double>();
        m.breakpoints = j.at("breakpoints").get<std::vector<Index>>();
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad matrix JSON: ") + e.what());
    }
}

Json to_json(const SsaResult& r) {
    Json j;
    j["method"] = to_string(r.method);
    if (r.method == Method::Cor) j["tau"] = r.tau;
    j["k"] = r.k;
    j["p"] = r.dim();
    if (r.method != Method::Sir) j["centering"] = to_string(r.centering);
    j["W_n"] = matrix_to_json(r.W_n);
    j["W_s"] = matrix_to_json(r.W_s);
    Json rows = Json::array();
    for (Index i = 0; i < r.eigen_table.rows(); ++i) {
        Json row;
        row["label"] = r.row_labels[static_cast<std::size_t>(i)];
        Json vals = Json::array();
        for (Index c = 0; c < r.eigen_table.cols(); ++c) vals.push_back(r.eigen_table(i, c));
        row["values"] = std::move(vals);
        rows.push_back(std::move(row));
    }
    Json table;
    table["rows"] = std::move(rows);
    if (r.method == Method::Comb) {
        Json sums = Json::array();
        for (Index c = 0; c < r.column_sums.size(); ++c) sums.push_back(r.column_sums(c));
        table["column_sums"] = std::move(sums);
    }
    j["eigen_table"] = std::move(table);
    Json center = Json::array();
    for (Index c = 0; c < r.center.size(); ++c) center.push_back(r.center(c));
    j["whitening"] = {{"center", std::move(center)}, {"whitener", matrix_to_json(r.whitener)}};
    j["warnings"] = r.warnings;
    return j;
}

SsaResult result_from_json(const Json& j) {
    try {
        SsaResult r;
        const auto method = parse_method(j.at("method").get<std::string>());
        if (!method) throw ParseError("unknown method in result JSON");
        r.method = *method;
        if (r.method == Method::Cor) r.tau = j.at("tau").get<Index>();
        r.k = j.at("k").get<Index>();
        if (j.value("centering", std::string("global")) == "interval") r.centering = Centering::Interval;
        r.W_n = matrix_from_json(j.at("W_n"));
        r.W_s = matrix_from_json(j.at("W_s"));
        const auto& rows = j.at("eigen_table").at("rows");
        const Index p = r.W_n.cols();
        r.eigen_table.resize(static_cast<Index>(rows.size()), p);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            r.row_labels.push_back(rows[i].at("label").get<std::string>());
            const auto vals = rows[i].at("values").get<std::vector<double>>();
            if (static_cast<Index>(vals.size()) != p) throw ParseError("eigen table row has the wrong length");
            for (Index c = 0; c < p; ++c) r.eigen_table(static_cast<Index>(i), c) = vals[static_cast<std::size_t>(c)];
        }
        if (r.method == Method::Comb) {
            const auto sums = j.at("eigen_table").at("column_sums").get<std::vector<double>>();
            r.column_sums = Eigen::Map<const Vector<double>>(sums.data(), static_cast<Index>(sums.size()));
        }
        const auto center = j.at("whitening").at("center").get<std::vector<double>>();
        r.center = Eigen::Map<const Vector<double>>(center.data(), static_cast<Index>(center.size()));
        r.whitener = matrix_from_json(j.at("whitening").at("whitener"));
        r.warnings = j.value("warnings", std::vector<std::string>{});
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad result JSON: ") + e.what());
    }
}

Json scenario_manifest(const sim::SimScenario& sc) {
    Json j;
    j["setting"] = sc.setting;
    j["T"] = sc.observed.length();
    j["seed"] = sc.seed;
    j["k"] = sc.k;
    j["nonstationary_idx"] = sc.nonstationary_idx;
    j["stationary_idx"] = sc.stationary_idx;
    j["latent_names"] = sc.latent.names();
    j["mixing"] = matrix_to_json(sc.mixing);
    j["true_P_n"] = matrix_to_json(sc.true_P_n);
    j["true_P_s"] = matrix_to_json(sc.true_P_s);
    return j;
}

}  // namespace ssa
