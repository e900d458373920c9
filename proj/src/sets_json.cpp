#include <string>

#include "gaugeopt/sets.hpp"

namespace gaugeopt {

using nlohmann::json;

namespace {

json vec_json(const Vec& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

json mat_json(const Mat& A) {
  json out = json::array();
  for (Eigen::Index i = 0; i < A.rows(); ++i) out.push_back(vec_json(A.row(i).transpose()));
  return out;
}

Vec vec_from(const json& j, const char* field) {
  const json& a = j.at(field);
  if (!a.is_array()) throw Error(ErrorCode::invalid_argument, std::string(field) + " must be an array");
  Vec v(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) v[i] = a[i].get<double>();
  return v;
}

Mat mat_from(const json& j, const char* field) {
  const json& rows = j.at(field);
  if (!rows.is_array() || rows.empty())
    throw Error(ErrorCode::invalid_argument, std::string(field) + " must be a nested array");
  const std::size_t n = rows[0].size();
  Mat A(rows.size(), n);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != n) throw Error(ErrorCode::dimension_mismatch, "ragged matrix rows");
    for (std::size_t k = 0; k < n; ++k) A(i, k) = rows[i][k].get<double>();
  }
  return A;
}

}  // namespace

json to_json(const Ball& ball) {
  return {{"kind", "ball"}, {"c", vec_json(ball.c)}, {"r", ball.r}};
}

json to_json(const StructuredSet& set) {
  return std::visit(
      [](const auto& s) -> json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Halfspace>) {
          return {{"kind", "halfspace"}, {"a", vec_json(s.a)}, {"b", s.b}};
        } else if constexpr (std::is_same_v<T, Ball>) {
          return to_json(s);
        } else if constexpr (std::is_same_v<T, PNormBall>) {
          return {{"kind", "pnorm_ball"}, {"p", s.p}, {"offset", vec_json(s.offset)}};
        } else if constexpr (std::is_same_v<T, PNormEllipsoid>) {
          return {{"kind", "pnorm_ellipsoid"},
                  {"A", mat_json(s.A())},
                  {"b", vec_json(s.b())},
                  {"p", s.p()},
                  {"tau", s.tau()}};
        } else {
          return {{"kind", "hull_ball_origin"}, {"c", vec_json(s.c)}, {"rho", s.rho}};
        }
      },
      set.variant());
}

StructuredSet set_from_json(const json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "halfspace") return StructuredSet::halfspace(vec_from(j, "a"), j.at("b").get<double>());
    if (kind == "ball") return StructuredSet::ball(vec_from(j, "c"), j.at("r").get<double>());
    if (kind == "pnorm_ball") {
      Vec offset = j.contains("offset") ? vec_from(j, "offset")
                                        : Vec::Zero(j.at("n").get<Eigen::Index>());
      return StructuredSet::pnorm_ball(j.at("p").get<double>(), std::move(offset));
    }
    if (kind == "pnorm_ellipsoid")
      return StructuredSet::pnorm_ellipsoid(mat_from(j, "A"), vec_from(j, "b"),
                                            j.at("p").get<double>(), j.at("tau").get<double>());
    if (kind == "hull_ball_origin")
      return StructuredSet::hull_ball_origin(vec_from(j, "c"), j.at("rho").get<double>());
    throw Error(ErrorCode::unsupported, "unknown set kind '" + kind + "'");
  } catch (const json::exception& ex) {
    throw Error(ErrorCode::invalid_argument, ex.what());
  }
}

}  // namespace gaugeopt
