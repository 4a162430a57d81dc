#include "moldmpc/sysid/model_file.hpp"

#include "moldmpc/sysid/state_space.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace moldmpc
{

using nlohmann::json;

namespace
{

json matrix_to_json(const Matrix& m)
{
    json data = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            data.push_back(m(i, j));
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

Matrix matrix_from_json(const json& j)
{
    const auto rows = j.at("rows").get<Eigen::Index>();
    const auto cols = j.at("cols").get<Eigen::Index>();
    const auto& data = j.at("data");
    if (static_cast<Eigen::Index>(data.size()) != rows * cols)
        throw InputError("model file: matrix data length does not match its shape");
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index k = 0; k < cols; ++k)
            m(i, k) = data.at(static_cast<size_t>(i * cols + k)).get<double>();
    return m;
}

json vector_to_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Vector vector_from_json(const json& j)
{
    const auto values = j.get<std::vector<double>>();
    return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

} // namespace

std::string serialize_model(const ArxModel& model)
{
    model.validate();
    json doc;
    doc["format"] = kModelFormat;
    doc["version"] = kModelFormatVersion;
    doc["orders"] = {{"r", model.r}, {"s", model.s}};
    doc["outputs"] = model.m;
    doc["inputs"] = model.nu;
    doc["sample_period_s"] = model.sample_period;
    doc["baseline"] = {{"y_C", vector_to_json(model.baseline.y)}, {"u_W", vector_to_json(model.baseline.u)}};
    doc["a"] = json::array();
    for (const auto& a : model.a)
        doc["a"].push_back(matrix_to_json(a));
    doc["b"] = json::array();
    for (const auto& b : model.b)
        doc["b"].push_back(matrix_to_json(b));
    if (model.residual_rms.size() == model.m)
        doc["residual"] = {{"rms_C", vector_to_json(model.residual_rms)}, {"max_C", model.residual_max}};

    const StateSpaceModel ss = arx_to_statespace(model);
    doc["state_space"] = {{"A", matrix_to_json(ss.A)}, {"B", matrix_to_json(ss.B)}, {"C", matrix_to_json(ss.C)}};
    return doc.dump(1);
}

ArxModel deserialize_model(const std::string& text)
{
    json doc;
    try
    {
        doc = json::parse(text);
        if (doc.at("format").get<std::string>() != kModelFormat)
            throw InputError("model file: unknown format");
        if (doc.at("version").get<int>() != kModelFormatVersion)
            throw InputError("model file: unsupported version " + std::to_string(doc.at("version").get<int>()));

        ArxModel model;
        model.r = doc.at("orders").at("r").get<int>();
        model.s = doc.at("orders").at("s").get<int>();
        model.m = doc.at("outputs").get<int>();
        model.nu = doc.at("inputs").get<int>();
        model.sample_period = doc.at("sample_period_s").get<double>();
        model.baseline.y = vector_from_json(doc.at("baseline").at("y_C"));
        model.baseline.u = vector_from_json(doc.at("baseline").at("u_W"));
        for (const auto& a : doc.at("a"))
            model.a.push_back(matrix_from_json(a));
        for (const auto& b : doc.at("b"))
            model.b.push_back(matrix_from_json(b));
        if (doc.contains("residual"))
        {
            model.residual_rms = vector_from_json(doc["residual"].at("rms_C"));
            model.residual_max = doc["residual"].at("max_C").get<double>();
        }
        model.validate();
        return model;
    }
    catch (const json::exception& e)
    {
        throw InputError(std::string("model file: ") + e.what());
    }
}

void save_model(const ArxModel& model, const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << serialize_model(model) << '\n';
}

ArxModel load_model(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return deserialize_model(buffer.str());
}

} // namespace moldmpc
