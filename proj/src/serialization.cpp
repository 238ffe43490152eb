#include "secrecy/serialization.hpp"

#include <cmath>
#include <fstream>

namespace secrecy
{

namespace
{

const Json& require(const Json& j, const char* key)
{
    if (!j.is_object() || !j.contains(key))
        throw Error(Errc::invalid_argument, std::string("json: missing key '") + key + "'");
    return j.at(key);
}

} // namespace

Json vector_to_json(const CVector& v)
{
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        out.push_back({v(i).real(), v(i).imag()});
    return out;
}

CVector vector_from_json(const Json& j)
{
    if (!j.is_array())
        throw Error(Errc::invalid_argument, "json: complex vector must be an array of [re, im]");
    CVector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i)
    {
        const Json& e = j[i];
        if (!e.is_array() || e.size() != 2)
            throw Error(Errc::invalid_argument, "json: complex entry must be [re, im]");
        v(static_cast<Eigen::Index>(i)) = Complex(e[0].get<double>(), e[1].get<double>());
    }
    return v;
}

Json matrix_to_json(const CMatrix& A)
{
    Json re = Json::array();
    Json im = Json::array();
    for (Eigen::Index r = 0; r < A.rows(); ++r)
    {
        Json rr = Json::array();
        Json ri = Json::array();
        for (Eigen::Index c = 0; c < A.cols(); ++c)
        {
            rr.push_back(A(r, c).real());
            ri.push_back(A(r, c).imag());
        }
        re.push_back(std::move(rr));
        im.push_back(std::move(ri));
    }
    return {{"re", re}, {"im", im}};
}

CMatrix matrix_from_json(const Json& j)
{
    const Json& re = require(j, "re");
    const Json& im = require(j, "im");
    if (!re.is_array() || !im.is_array() || re.size() != im.size())
        throw Error(Errc::dimension_mismatch, "json: matrix re/im parts differ in shape");
    const auto rows = static_cast<Eigen::Index>(re.size());
    const auto cols = rows > 0 ? static_cast<Eigen::Index>(re[0].size()) : 0;
    CMatrix A(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
    {
        const Json& rr = re[static_cast<std::size_t>(r)];
        const Json& ri = im[static_cast<std::size_t>(r)];
        if (static_cast<Eigen::Index>(rr.size()) != cols || static_cast<Eigen::Index>(ri.size()) != cols)
            throw Error(Errc::dimension_mismatch, "json: ragged matrix rows");
        for (Eigen::Index c = 0; c < cols; ++c)
            A(r, c) = Complex(rr[static_cast<std::size_t>(c)].get<double>(), ri[static_cast<std::size_t>(c)].get<double>());
    }
    return A;
}

void to_json(Json& j, const ProblemInstance& instance)
{
    Json eves = Json::array();
    for (const auto& e : instance.eves)
        eves.push_back({{"g_bar", vector_to_json(e.g_bar)}, {"epsilon", e.epsilon}});
    j = {{"nt", instance.nt()},
         {"h", vector_to_json(instance.h)},
         {"eves", eves},
         {"power_db", linear_to_db(instance.power)},
         {"power", instance.power}};
}

void from_json(const Json& j, ProblemInstance& instance)
{
    instance.h = vector_from_json(require(j, "h"));
    instance.eves.clear();
    for (const Json& e : require(j, "eves"))
        instance.eves.push_back({vector_from_json(require(e, "g_bar")), require(e, "epsilon").get<double>()});
    if (j.contains("power"))
        instance.power = j.at("power").get<double>();
    else
        instance.power = db_to_linear(require(j, "power_db").get<double>());
    if (j.contains("nt") && j.at("nt").get<int>() != instance.nt())
        throw Error(Errc::dimension_mismatch, "json: nt does not match the length of h");
}

void to_json(Json& j, const TransmitDesign& design)
{
    j = {{"W", matrix_to_json(design.W)}, {"Sigma", matrix_to_json(design.Sigma)}};
    if (design.beam)
        j["beam"] = vector_to_json(*design.beam);
}

void from_json(const Json& j, TransmitDesign& design)
{
    design.W = matrix_from_json(require(j, "W"));
    design.Sigma = matrix_from_json(require(j, "Sigma"));
    design.beam.reset();
    if (j.contains("beam") && !j.at("beam").is_null())
        design.beam = vector_from_json(j.at("beam"));
}

void to_json(Json& j, const WorstCaseEveReport& report)
{
    j = {{"k", report.k},
         {"worst_ratio", report.worst_ratio},
         {"worst_g", vector_to_json(report.worst_g)},
         {"bob_term", report.bob_term},
         {"secrecy_term", report.secrecy_term}};
}

void from_json(const Json& j, WorstCaseEveReport& report)
{
    report.k = require(j, "k").get<int>();
    report.worst_ratio = require(j, "worst_ratio").get<double>();
    report.worst_g = vector_from_json(require(j, "worst_g"));
    report.bob_term = require(j, "bob_term").get<double>();
    report.secrecy_term = require(j, "secrecy_term").get<double>();
}

void to_json(Json& j, const DesignEvaluation& evaluation)
{
    j = {{"rate", evaluation.rate}, {"per_eve", evaluation.reports}};
}

void from_json(const Json& j, DesignEvaluation& evaluation)
{
    evaluation.rate = require(j, "rate").get<double>();
    evaluation.reports = require(j, "per_eve").get<std::vector<WorstCaseEveReport>>();
}

void to_json(Json& j, const LineSearchTrace& trace)
{
    Json samples = Json::array();
    for (const auto& s : trace.samples)
    {
        Json e = {{"beta", s.beta},
                  {"phi", s.phi},
                  {"ok", s.ok},
                  {"stage", s.stage == SampleStage::grid ? "grid" : "golden"}};
        if (!s.message.empty())
            e["message"] = s.message;
        samples.push_back(std::move(e));
    }
    Json brackets = Json::array();
    for (const auto& [a, b] : trace.brackets)
        brackets.push_back({a, b});
    j = {{"samples", samples}, {"brackets", brackets}, {"beta_star", trace.beta_star}, {"phi_star", trace.phi_star}};
}

void from_json(const Json& j, LineSearchTrace& trace)
{
    trace.samples.clear();
    for (const Json& e : require(j, "samples"))
    {
        LineSearchSample s;
        s.beta = require(e, "beta").get<double>();
        s.phi = require(e, "phi").get<double>();
        s.ok = require(e, "ok").get<bool>();
        const auto stage = require(e, "stage").get<std::string>();
        if (stage != "grid" && stage != "golden")
            throw Error(Errc::invalid_argument, "json: unknown sample stage '" + stage + "'");
        s.stage = stage == "grid" ? SampleStage::grid : SampleStage::golden;
        s.message = e.value("message", std::string{});
        trace.samples.push_back(std::move(s));
    }
    trace.brackets.clear();
    for (const Json& b : j.value("brackets", Json::array()))
        trace.brackets.emplace_back(b.at(0).get<double>(), b.at(1).get<double>());
    trace.beta_star = require(j, "beta_star").get<double>();
    trace.phi_star = require(j, "phi_star").get<double>();
}

void to_json(Json& j, const SecrecyResult& result)
{
    j = result.design;
    j["rate"] = result.rate_worst_case;
    j["beta_star"] = result.beta_star;
    j["per_eve"] = result.per_eve;
    j["trace"] = result.trace;
    j["lambda_ratio"] = result.lambda_ratio ? Json(*result.lambda_ratio) : Json(nullptr);
}

void from_json(const Json& j, SecrecyResult& result)
{
    result.design = j.get<TransmitDesign>();
    result.rate_worst_case = require(j, "rate").get<double>();
    result.beta_star = require(j, "beta_star").get<double>();
    result.per_eve = require(j, "per_eve").get<std::vector<WorstCaseEveReport>>();
    result.trace = require(j, "trace").get<LineSearchTrace>();
    result.lambda_ratio.reset();
    if (j.contains("lambda_ratio") && !j.at("lambda_ratio").is_null())
        result.lambda_ratio = j.at("lambda_ratio").get<double>();
}

void to_json(Json& j, const SweepConfig& config)
{
    Json methods = Json::array();
    for (Method m : config.methods)
        methods.push_back(to_string(m));
    j = {{"nt", config.nt},
         {"K", config.K},
         {"trials", config.trials},
         {"seed", config.seed},
         {"sweep_axis", to_string(config.sweep_axis)},
         {"axis_values", config.axis_values},
         {"fixed", config.fixed},
         {"methods", methods}};
}

void from_json(const Json& j, SweepConfig& config)
{
    config = SweepConfig{};
    config.nt = j.value("nt", config.nt);
    config.K = j.value("K", config.K);
    config.trials = j.value("trials", config.trials);
    config.seed = j.value("seed", config.seed);
    config.sweep_axis = parse_axis(require(j, "sweep_axis").get<std::string>());
    config.axis_values = require(j, "axis_values").get<std::vector<double>>();
    config.fixed = require(j, "fixed").get<double>();
    if (j.contains("methods"))
    {
        config.methods.clear();
        for (const Json& m : j.at("methods"))
            config.methods.push_back(parse_method(m.get<std::string>()));
    }
}

Json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(Errc::invalid_argument, "cannot open '" + path + "'");
    try
    {
        return Json::parse(in);
    }
    catch (const Json::exception& ex)
    {
        throw Error(Errc::invalid_argument, "'" + path + "': " + ex.what());
    }
}

void write_json_file(const std::string& path, const Json& j)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(Errc::invalid_argument, "cannot write '" + path + "'");
    out << j.dump(2) << '\n';
}

} // namespace secrecy
