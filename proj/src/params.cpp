#include "unfolder/params.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace unfolder {

void Params::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0)) throw std::invalid_argument(std::string(name) + " must be positive");
    };
    auto fraction = [](double v, const char* name) {
        if (!(v > 0.0) || v > 1.0)
            throw std::invalid_argument(std::string(name) + " must be in (0, 1]");
    };
    auto angle = [](double v, const char* name) {
        if (!(v > 0.0) || !(v < 180.0))
            throw std::invalid_argument(std::string(name) + " must be in (0, 180)");
    };
    positive(delta_min_e, "delta_min_e");
    fraction(rho_min, "rho_min");
    positive(eps_c, "eps_c");
    positive(eps_o, "eps_o");
    angle(phi_max_c, "phi_max_c");
    positive(delta_max_c, "delta_max_c");
    positive(delta_min_b, "delta_min_b");
    fraction(rho_min_l1, "rho_min_l1");
    fraction(rho_min_l2, "rho_min_l2");
    positive(beta, "beta");
    positive(sigma, "sigma");
    positive(beta_p, "beta_p");
    positive(lambda, "lambda");
    positive(r0, "r0");
    fraction(ratio_tol, "ratio_tol");
    angle(phi_max_v, "phi_max_v");
    fraction(rho_max_v, "rho_max_v");
    if (out_w <= 0 || out_h <= 0) throw std::invalid_argument("output size must be positive");
    if (k_lines < 1) throw std::invalid_argument("k_lines must be >= 1");
    if (w_work < 64) throw std::invalid_argument("w_work must be >= 64");
}

Params params_from_json_text(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    Params p;
    auto get = [&](const char* key, auto& field) {
        if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    get("delta_min_e", p.delta_min_e);
    get("rho_min", p.rho_min);
    get("eps_c", p.eps_c);
    get("eps_o", p.eps_o);
    get("phi_max_c", p.phi_max_c);
    get("delta_max_c", p.delta_max_c);
    get("delta_min_b", p.delta_min_b);
    get("rho_min_l1", p.rho_min_l1);
    get("rho_min_l2", p.rho_min_l2);
    get("beta", p.beta);
    get("sigma", p.sigma);
    get("beta_p", p.beta_p);
    get("lambda", p.lambda);
    get("r0", p.r0);
    get("ratio_tol", p.ratio_tol);
    get("phi_max_v", p.phi_max_v);
    get("rho_max_v", p.rho_max_v);
    get("out_w", p.out_w);
    get("out_h", p.out_h);
    get("k_lines", p.k_lines);
    get("w_work", p.w_work);
    p.validate();
    return p;
}

Params load_params(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return params_from_json_text(ss.str());
}

}  // namespace unfolder
