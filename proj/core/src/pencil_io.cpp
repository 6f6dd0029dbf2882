#include "ncrank/pencil_io.hpp"

#include <json.hpp>

namespace ncrank {

using nlohmann::json;

namespace {

json entry_list(const LinearPencil& a, std::size_t var) {
  json arr = json::array();
  for (const auto& e : a.entries())
    if (e.var == var) arr.push_back(json::array({e.row, e.col, e.value.get_str()}));
  return arr;
}

mpq_class parse_value(const json& v) {
  if (v.is_string()) {
    mpq_class q;
    if (q.set_str(v.get<std::string>(), 10) != 0) throw std::invalid_argument("bad numeric string: " + v.dump());
    q.canonicalize();
    return q;
  }
  if (v.is_number_integer()) return mpq_class(mpz_class(v.dump()));
  throw std::invalid_argument("entry value must be a decimal string or integer");
}

}  // namespace

std::string pencil_to_json(const LinearPencil& a) {
  json j;
  j["rows"] = a.rows();
  j["cols"] = a.cols();
  j["num_vars"] = a.num_vars();
  if (a.domain().is_prime()) j["modulus"] = std::to_string(a.domain().modulus());
  j["constant"] = entry_list(a, 0);
  json coeffs = json::array();
  for (std::size_t v = 1; v <= a.num_vars(); ++v) coeffs.push_back(entry_list(a, v));
  j["coeffs"] = coeffs;
  return j.dump();
}

LinearPencil pencil_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("pencil JSON: ") + e.what());
  }
  try {
    std::size_t rows = j.at("rows").get<std::size_t>();
    std::size_t cols = j.at("cols").get<std::size_t>();
    std::size_t m = j.at("num_vars").get<std::size_t>();
    ScalarDomain dom = ScalarDomain::rational();
    if (j.contains("modulus")) {
      const json& mj = j["modulus"];
      std::uint64_t mod = mj.is_string() ? std::stoull(mj.get<std::string>()) : mj.get<std::uint64_t>();
      dom = ScalarDomain::prime(mod);
    }
    LinearPencil a(rows, cols, m, dom);
    auto load = [&](const json& list, std::size_t var) {
      for (const json& e : list) {
        if (!e.is_array() || e.size() != 3) throw std::invalid_argument("pencil entry must be [i,j,value]");
        a.add(e[0].get<std::size_t>(), e[1].get<std::size_t>(), var, parse_value(e[2]));
      }
    };
    if (j.contains("constant")) load(j["constant"], 0);
    const json& coeffs = j.at("coeffs");
    if (coeffs.size() != m) throw std::invalid_argument("coeffs length differs from num_vars");
    for (std::size_t v = 0; v < m; ++v) load(coeffs[v], v + 1);
    return a;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("pencil JSON: ") + e.what());
  } catch (const std::out_of_range& e) {
    throw std::invalid_argument(std::string("pencil JSON: ") + e.what());
  }
}

}  // namespace ncrank
