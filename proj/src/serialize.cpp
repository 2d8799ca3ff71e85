#include "vartopic/serialize.hpp"

#include "vartopic/errors.hpp"

#include <json.hpp>

#include <fstream>

namespace vartopic {

namespace {

using nlohmann::json;

json matrix_json(const Eigen::MatrixXd& m) {
    std::vector<double> data;
    data.reserve(static_cast<std::size_t>(m.size()));
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            data.push_back(m(r, c));
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

Eigen::MatrixXd json_matrix(const json& j) {
    const auto rows = j.at("rows").get<Eigen::Index>();
    const auto cols = j.at("cols").get<Eigen::Index>();
    const auto data = j.at("data").get<std::vector<double>>();
    if (rows < 0 || cols < 0 || static_cast<std::size_t>(rows * cols) != data.size())
        throw ValidationError("matrix data does not match its dimensions");
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c)
            m(r, c) = data[static_cast<std::size_t>(r * cols + c)];
    return m;
}

} // namespace

void write_model(std::ostream& out, const FittedModel& model) {
    json solutions = json::array();
    for (const auto& [n, sol] : model.solutions)
        solutions.push_back({{"n", n},
                             {"loadings", matrix_json(sol.loadings)},
                             {"rotmat", matrix_json(sol.rotmat)},
                             {"scores", matrix_json(sol.scores)},
                             {"criterion_trace", sol.criterion_trace},
                             {"sweeps", sol.sweeps}});
    const std::vector<double> center(model.center.data(), model.center.data() + model.center.size());
    const json j = {{"totalvar", model.totalvar},
                    {"sdev", model.sdev},
                    {"rows", model.rows},
                    {"cols", model.cols},
                    {"center", center},
                    {"scale", model.scale},
                    {"rotation", matrix_json(model.rotation)},
                    {"n_values", model.n_values},
                    {"solutions", solutions},
                    {"warnings", model.warnings}};
    out << j.dump() << '\n';
}

FittedModel read_model(std::istream& in) {
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("model is not valid JSON: ") + e.what(), 0);
    }
    FittedModel model;
    try {
        model.totalvar = j.at("totalvar").get<double>();
        model.sdev = j.at("sdev").get<std::vector<double>>();
        model.rows = j.at("rows").get<std::vector<std::string>>();
        model.cols = j.at("cols").get<std::vector<std::string>>();
        const auto center = j.at("center").get<std::vector<double>>();
        model.center = Eigen::Map<const Eigen::VectorXd>(center.data(), static_cast<Eigen::Index>(center.size()));
        model.scale = j.at("scale").get<bool>();
        model.rotation = json_matrix(j.at("rotation"));
        model.n_values = j.at("n_values").get<std::vector<int>>();
        for (const auto& s : j.at("solutions")) {
            VarimaxSolution sol;
            sol.loadings = json_matrix(s.at("loadings"));
            sol.rotmat = json_matrix(s.at("rotmat"));
            sol.scores = json_matrix(s.at("scores"));
            sol.criterion_trace = s.at("criterion_trace").get<std::vector<double>>();
            sol.sweeps = s.at("sweeps").get<int>();
            model.solutions.emplace(s.at("n").get<int>(), std::move(sol));
        }
        model.warnings = j.value("warnings", std::vector<std::string>{});
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed model: ") + e.what());
    }
    for (int n : model.n_values) {
        const auto it = model.solutions.find(n);
        if (it == model.solutions.end())
            throw ValidationError("model lists n = " + std::to_string(n) + " without a solution");
        const auto& sol = it->second;
        if (sol.loadings.rows() != static_cast<Eigen::Index>(model.cols.size()) || sol.loadings.cols() != n ||
            sol.scores.rows() != static_cast<Eigen::Index>(model.rows.size()) || sol.scores.cols() != n)
            throw ValidationError("solution n = " + std::to_string(n) + " has inconsistent dimensions");
    }
    return model;
}

void save_model(const std::filesystem::path& path, const FittedModel& model) {
    std::ofstream out(path);
    if (!out)
        throw ValidationError("cannot write '" + path.string() + "'");
    write_model(out, model);
}

FittedModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ValidationError("cannot open '" + path.string() + "'");
    return read_model(in);
}

} // namespace vartopic
