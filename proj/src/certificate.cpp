#include <json.hpp>

#include "auditcount/counters.hpp"
#include "auditcount/errors.hpp"

namespace auditcount {

using Json = nlohmann::ordered_json;

namespace {

Json hash_to_json(const HashFunction& h) {
  Json j;
  j["n"] = h.n;
  j["m"] = h.m;
  j["k"] = h.k;
  j["w"] = h.spec.w;
  j["modulus_hex"] = h.spec.modulus_hex();
  Json coeffs = Json::array();
  for (const FieldElem& c : h.coeffs)
    coeffs.push_back(bits_to_hex(
        std::span<const std::uint64_t>(c.limbs.data(), 4), h.spec.w));
  j["coeffs_hex"] = std::move(coeffs);
  return j;
}

HashFunction hash_from_json(const Json& j) {
  HashFunction h;
  h.n = j.at("n").get<int>();
  h.m = j.at("m").get<int>();
  h.k = j.at("k").get<int>();
  int w = j.at("w").get<int>();
  h.spec = FieldSpec::from_modulus_hex(w, j.at("modulus_hex").get<std::string>());
  const Json& coeffs = j.at("coeffs_hex");
  if (!coeffs.is_array() || static_cast<int>(coeffs.size()) != h.k)
    throw CertificateError("coefficient array does not match k");
  for (const Json& c : coeffs) {
    auto words = hex_to_bits(c.get<std::string>(), w);
    FieldElem e;
    std::copy(words.begin(), words.end(), e.limbs.begin());
    h.coeffs.push_back(e);
  }
  return h;
}

Json estimate_to_json(const Estimate& e) {
  Json j;
  if (e.dyadic) {
    j["num"] = e.num;
    j["den"] = e.den;
  } else {
    j["num"] = nullptr;
    j["den"] = nullptr;
    j["exact"] = e.exact;
  }
  j["decimal"] = e.decimal;
  return j;
}

Estimate estimate_from_json(const Json& j) {
  Estimate e;
  if (j.at("num").is_null()) {
    e.dyadic = false;
    e.exact = j.value("exact", std::uint64_t{0});
  } else {
    e.dyadic = true;
    e.num = j.at("num").get<long long>();
    e.den = j.at("den").get<int>();
  }
  e.decimal = j.at("decimal").get<double>();
  return e;
}

}  // namespace

std::string write_certificate(const Certificate& cert) {
  Json j;
  j["algorithm"] = cert.algorithm;
  j["n"] = cert.n;
  j["copies"] = cert.copies;
  j["formula_digest"] = cert.formula_digest;
  j["estimate"] = estimate_to_json(cert.estimate);
  Json params;
  if (cert.algorithm == "stock") {
    params["v"] = cert.v;
  } else if (cert.algorithm == "cells") {
    params["m"] = cert.m;
    params["ell"] = cert.ell;
    params["u"] = cert.u;
  } else if (cert.algorithm == "af") {
    params["c_low"] = cert.c_low;
    params["c_high"] = cert.c_high;
  }
  j["params"] = std::move(params);
  Json hashes = Json::array();
  for (const HashFunction& h : cert.hashes) hashes.push_back(hash_to_json(h));
  j["hashes"] = std::move(hashes);
  j["oracle"] = Json{{"mode", cert.oracle_mode},
                     {"seed", cert.seed},
                     {"trials", cert.trials}};
  j["version"] = cert.version;
  return j.dump(1) + "\n";
}

Certificate read_certificate(std::string_view json_text) {
  Json j;
  try {
    j = Json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw CertificateError(std::string("certificate is not valid JSON: ") +
                           e.what());
  }
  try {
    Certificate cert;
    cert.algorithm = j.at("algorithm").get<std::string>();
    if (cert.algorithm != "stock" && cert.algorithm != "cells" &&
        cert.algorithm != "af")
      throw CertificateError("unknown algorithm \"" + cert.algorithm + "\"");
    cert.n = j.at("n").get<int>();
    cert.copies = j.at("copies").get<int>();
    cert.formula_digest = j.at("formula_digest").get<std::string>();
    cert.estimate = estimate_from_json(j.at("estimate"));
    const Json& params = j.at("params");
    if (cert.algorithm == "stock") {
      cert.v = params.at("v").get<int>();
    } else if (cert.algorithm == "cells") {
      cert.m = params.at("m").get<int>();
      cert.ell = params.at("ell").get<long long>();
      cert.u = params.at("u").get<long long>();
    } else {
      cert.c_low = params.at("c_low").get<int>();
      cert.c_high = params.at("c_high").get<int>();
    }
    for (const Json& h : j.at("hashes")) cert.hashes.push_back(hash_from_json(h));
    const Json& oracle = j.at("oracle");
    cert.oracle_mode = oracle.at("mode").get<std::string>();
    cert.seed = oracle.at("seed").get<std::uint64_t>();
    cert.trials = oracle.at("trials").get<int>();
    cert.version = j.at("version").get<std::string>();
    cert.estimate.copies = cert.copies;
    return cert;
  } catch (const nlohmann::json::exception& e) {
    throw CertificateError(std::string("certificate schema violation: ") +
                           e.what());
  } catch (const std::invalid_argument& e) {
    throw CertificateError(std::string("certificate field malformed: ") +
                           e.what());
  }
}

}  // namespace auditcount
