#pragma once

#include <Eigen/Dense>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "extrap/bases.hpp"
#include "extrap/datagen.hpp"
#include "extrap/nnet.hpp"

namespace extrap {

using nlohmann::json;

inline json basis_to_json(const BasisFamily& family) {
  json j;
  j["kind"] = basis_kind_name(family.kind());
  j["ordering_version"] = 1;
  switch (family.kind()) {
    case BasisKind::chebyshev:
      j["dimension"] = family.dimension();
      break;
    case BasisKind::trigonometric:
      j["dimension"] = family.dimension();
      j["include_constant"] = family.trig_includes_constant();
      break;
    case BasisKind::spherical_harmonic:
      j["l_max"] = family.l_max();
      break;
    case BasisKind::anchor_frame: {
      json anchors = json::array(), fillers = json::array();
      for (int k = 1; k <= family.dimension(); ++k) {
        if (k <= family.anchor_count())
          anchors.push_back(family.member(k).symbol());
        else
          fillers.push_back(family.member(k).symbol());
      }
      j["anchors"] = anchors;
      j["fillers"] = fillers;
      break;
    }
    case BasisKind::custom: {
      json members = json::array();
      for (int k = 1; k <= family.dimension(); ++k)
        members.push_back(family.member(k).symbol());
      j["members"] = members;
      break;
    }
    case BasisKind::mixed:
      throw std::invalid_argument("basis_to_json: mixed families are not serializable");
  }
  return j;
}

inline BasisFamily basis_from_json(const json& j) {
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "chebyshev") return BasisFamily::chebyshev(j.at("dimension").get<int>());
  if (kind == "trigonometric")
    return BasisFamily::trigonometric(j.at("dimension").get<int>(),
                                      j.value("include_constant", true));
  if (kind == "spherical-harmonic")
    return BasisFamily::spherical_harmonics(j.at("l_max").get<int>());
  if (kind == "anchor-frame") {
    std::vector<FunctionHandle> anchors, fillers;
    for (const auto& s : j.at("anchors")) anchors.push_back(FunctionHandle::parse(s));
    for (const auto& s : j.at("fillers")) fillers.push_back(FunctionHandle::parse(s));
    return BasisFamily::anchor_frame(std::move(anchors), std::move(fillers));
  }
  if (kind == "custom") {
    std::vector<FunctionHandle> members;
    for (const auto& s : j.at("members")) members.push_back(FunctionHandle::parse(s));
    return BasisFamily::from_handles(std::move(members));
  }
  throw std::invalid_argument("basis_from_json: unknown kind " + kind);
}

inline json points_to_json(const std::vector<Point>& pts) {
  json j;
  if (!pts.empty() && pts.front().on_sphere) {
    j["kind"] = "sphere";
    json theta = json::array(), phi = json::array();
    for (const Point& p : pts) {
      theta.push_back(p.u);
      phi.push_back(p.v);
    }
    j["theta"] = theta;
    j["phi"] = phi;
  } else {
    j["kind"] = "interval";
    json x = json::array();
    for (const Point& p : pts) x.push_back(p.u);
    j["x"] = x;
  }
  return j;
}

inline std::vector<Point> points_from_json(const json& j) {
  std::vector<Point> pts;
  if (j.at("kind").get<std::string>() == "sphere") {
    const auto& theta = j.at("theta");
    const auto& phi = j.at("phi");
    for (std::size_t i = 0; i < theta.size(); ++i)
      pts.push_back(Point::sphere(theta[i].get<double>(), phi[i].get<double>()));
  } else {
    for (const auto& x : j.at("x")) pts.push_back(Point::interval(x.get<double>()));
  }
  return pts;
}

// snr_db may be infinite; JSON has no inf literal, so it travels as "inf".
inline json snr_to_json(double snr_db) {
  if (std::isinf(snr_db) && snr_db > 0.0) return "inf";
  return snr_db;
}

inline double snr_from_json(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
    throw std::invalid_argument("bad snr value: " + j.get<std::string>());
  }
  return j.get<double>();
}

inline json gen_config_to_json(const GenConfig& g) {
  json j;
  j["r_m"] = g.r_m;
  j["r_sigma"] = g.r_sigma;
  j["n_low"] = g.n_low;
  j["n_high"] = g.n_high;
  j["batch_size"] = g.n_batch;
  j["snr_db"] = snr_to_json(g.snr_db);
  j["monotone"] = g.monotone;
  j["norm"] = g.norm == NormMode::coeff ? "coeff" : "function-omega";
  return j;
}

inline GenConfig gen_config_from_json(const json& j) {
  GenConfig g;
  g.r_m = j.at("r_m").get<double>();
  g.r_sigma = j.at("r_sigma").get<double>();
  g.n_low = j.at("n_low").get<int>();
  g.n_high = j.at("n_high").get<int>();
  g.n_batch = j.at("batch_size").get<int>();
  g.snr_db = snr_from_json(j.at("snr_db"));
  g.monotone = j.at("monotone").get<bool>();
  g.norm = j.at("norm").get<std::string>() == "coeff" ? NormMode::coeff
                                                      : NormMode::function_omega;
  return g;
}

inline json train_config_to_json(const TrainConfig& t) {
  json j;
  j["hidden"] = t.hidden;
  j["activation"] = activation_name(t.activation);
  j["snake_learnable"] = t.snake_learnable;
  j["snake_beta"] = t.snake_beta;
  j["lambda_core"] = t.lambda_core;
  j["lambda_ext"] = t.lambda_ext;
  j["learning_rate"] = t.learning_rate;
  j["adam_beta1"] = t.adam_beta1;
  j["adam_beta2"] = t.adam_beta2;
  j["adam_eps"] = t.adam_eps;
  j["max_steps"] = t.max_steps;
  j["conv_window"] = t.conv_window;
  j["conv_tol"] = t.conv_tol;
  if (!std::isnan(t.ext_x_start)) j["ext_x_start"] = t.ext_x_start;
  if (!std::isnan(t.ext_x_end)) j["ext_x_end"] = t.ext_x_end;
  return j;
}

inline TrainConfig train_config_from_json(const json& j) {
  TrainConfig t;
  t.hidden = j.at("hidden").get<std::vector<int>>();
  t.activation = activation_from_name(j.at("activation").get<std::string>());
  t.snake_learnable = j.at("snake_learnable").get<bool>();
  t.snake_beta = j.value("snake_beta", 1.0);
  t.lambda_core = j.at("lambda_core").get<double>();
  t.lambda_ext = j.at("lambda_ext").get<double>();
  t.learning_rate = j.at("learning_rate").get<double>();
  t.adam_beta1 = j.at("adam_beta1").get<double>();
  t.adam_beta2 = j.at("adam_beta2").get<double>();
  t.adam_eps = j.at("adam_eps").get<double>();
  t.max_steps = j.at("max_steps").get<int>();
  t.conv_window = j.at("conv_window").get<int>();
  t.conv_tol = j.at("conv_tol").get<double>();
  if (j.contains("ext_x_start")) t.ext_x_start = j.at("ext_x_start").get<double>();
  if (j.contains("ext_x_end")) t.ext_x_end = j.at("ext_x_end").get<double>();
  return t;
}

/// A trained model with everything needed to rerun predictions: the basis,
/// the fixed sample points, the layer stack and the config echo.
struct ModelRecord {
  Mlp net;
  BasisFamily basis = BasisFamily::chebyshev(1);
  std::shared_ptr<const std::vector<Point>> sample_points;
  GenConfig gen_config;
  TrainConfig train_config;
  std::uint64_t seed = 0;
};

inline json model_to_json(const ModelRecord& m) {
  json j;
  j["schema_version"] = 1;
  j["seed"] = m.seed;
  j["basis"] = basis_to_json(m.basis);
  j["sample_points"] = points_to_json(*m.sample_points);
  j["gen_config"] = gen_config_to_json(m.gen_config);
  j["train_config"] = train_config_to_json(m.train_config);
  json layers = json::array();
  for (const Layer& layer : m.net.layers) {
    json lj;
    lj["rows"] = layer.w.rows();
    lj["cols"] = layer.w.cols();
    lj["activation"] = activation_name(layer.act);
    lj["snake_beta"] = layer.snake_beta;
    lj["snake_beta_learnable"] = layer.snake_beta_learnable;
    json w = json::array();
    for (Eigen::Index r = 0; r < layer.w.rows(); ++r)
      for (Eigen::Index c = 0; c < layer.w.cols(); ++c) w.push_back(layer.w(r, c));
    lj["weights"] = w;  // row-major
    json b = json::array();
    for (Eigen::Index i = 0; i < layer.b.size(); ++i) b.push_back(layer.b[i]);
    lj["bias"] = b;
    layers.push_back(lj);
  }
  j["layers"] = layers;
  return j;
}

inline ModelRecord model_from_json(const json& j) {
  if (j.at("schema_version").get<int>() != 1)
    throw std::invalid_argument("model: unsupported schema version");
  ModelRecord m;
  m.seed = j.at("seed").get<std::uint64_t>();
  m.basis = basis_from_json(j.at("basis"));
  m.sample_points =
      std::make_shared<const std::vector<Point>>(points_from_json(j.at("sample_points")));
  m.gen_config = gen_config_from_json(j.at("gen_config"));
  m.train_config = train_config_from_json(j.at("train_config"));
  for (const auto& lj : j.at("layers")) {
    Layer layer;
    Eigen::Index rows = lj.at("rows").get<Eigen::Index>();
    Eigen::Index cols = lj.at("cols").get<Eigen::Index>();
    const auto& w = lj.at("weights");
    if (static_cast<Eigen::Index>(w.size()) != rows * cols)
      throw std::invalid_argument("model: weight count mismatch");
    layer.w.resize(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
      for (Eigen::Index c = 0; c < cols; ++c)
        layer.w(r, c) = w[static_cast<std::size_t>(r * cols + c)].get<double>();
    const auto& b = lj.at("bias");
    layer.b.resize(static_cast<Eigen::Index>(b.size()));
    for (Eigen::Index i = 0; i < layer.b.size(); ++i)
      layer.b[i] = b[static_cast<std::size_t>(i)].get<double>();
    layer.act = activation_from_name(lj.at("activation").get<std::string>());
    layer.snake_beta = lj.at("snake_beta").get<double>();
    layer.snake_beta_learnable = lj.at("snake_beta_learnable").get<bool>();
    m.net.layers.push_back(std::move(layer));
  }
  if (m.net.layers.empty()) throw std::invalid_argument("model: no layers");
  return m;
}

inline void save_model(const ModelRecord& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write model file: " + path);
  out << model_to_json(m).dump(1) << "\n";
}

inline ModelRecord load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read model file: " + path);
  json j = json::parse(in);
  return model_from_json(j);
}

inline json adam_state_to_json(const AdamState& st) {
  json j;
  j["learning_rate"] = st.learning_rate;
  j["beta1"] = st.beta1;
  j["beta2"] = st.beta2;
  j["eps"] = st.eps;
  j["step"] = st.step;
  auto dump_mats = [](const std::vector<Eigen::MatrixXd>& mats) {
    json arr = json::array();
    for (const auto& m : mats) {
      json mj;
      mj["rows"] = m.rows();
      mj["cols"] = m.cols();
      json v = json::array();
      for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) v.push_back(m(r, c));
      mj["values"] = v;
      arr.push_back(mj);
    }
    return arr;
  };
  auto dump_vecs = [](const std::vector<Eigen::VectorXd>& vecs) {
    json arr = json::array();
    for (const auto& v : vecs) {
      json vv = json::array();
      for (Eigen::Index i = 0; i < v.size(); ++i) vv.push_back(v[i]);
      arr.push_back(vv);
    }
    return arr;
  };
  j["mw"] = dump_mats(st.mw);
  j["vw"] = dump_mats(st.vw);
  j["mb"] = dump_vecs(st.mb);
  j["vb"] = dump_vecs(st.vb);
  j["mbeta"] = st.mbeta;
  j["vbeta"] = st.vbeta;
  return j;
}

inline AdamState adam_state_from_json(const json& j) {
  AdamState st;
  st.learning_rate = j.at("learning_rate").get<double>();
  st.beta1 = j.at("beta1").get<double>();
  st.beta2 = j.at("beta2").get<double>();
  st.eps = j.at("eps").get<double>();
  st.step = j.at("step").get<long>();
  auto load_mats = [](const json& arr) {
    std::vector<Eigen::MatrixXd> mats;
    for (const auto& mj : arr) {
      Eigen::Index rows = mj.at("rows").get<Eigen::Index>();
      Eigen::Index cols = mj.at("cols").get<Eigen::Index>();
      Eigen::MatrixXd m(rows, cols);
      const auto& v = mj.at("values");
      for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c)
          m(r, c) = v[static_cast<std::size_t>(r * cols + c)].get<double>();
      mats.push_back(std::move(m));
    }
    return mats;
  };
  auto load_vecs = [](const json& arr) {
    std::vector<Eigen::VectorXd> vecs;
    for (const auto& vj : arr) {
      Eigen::VectorXd v(static_cast<Eigen::Index>(vj.size()));
      for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = vj[static_cast<std::size_t>(i)].get<double>();
      vecs.push_back(std::move(v));
    }
    return vecs;
  };
  st.mw = load_mats(j.at("mw"));
  st.vw = load_mats(j.at("vw"));
  st.mb = load_vecs(j.at("mb"));
  st.vb = load_vecs(j.at("vb"));
  st.mbeta = j.at("mbeta").get<std::vector<double>>();
  st.vbeta = j.at("vbeta").get<std::vector<double>>();
  return st;
}

}  // namespace extrap
