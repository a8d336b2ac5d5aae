#include "orbitlab/serialization.hpp"

#include <set>

namespace orbitlab {

namespace {

std::string as_text(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  if (j.is_number_unsigned()) return std::to_string(j.get<unsigned long long>());
  throw ParseError("expected a number or a string, got " + j.dump());
}

BigRational rational_from(const Json& j) { return parse_rational(as_text(j)); }

BigInt integer_from(const Json& j) {
  const BigRational q = rational_from(j);
  if (q.get_den() != 1) throw ParseError("expected an integer, got " + j.dump());
  return q.get_num();
}

std::uint64_t u64_from(const Json& j) {
  const BigInt z = integer_from(j);
  if (z < 0 || !z.fits_ulong_p()) throw ParseError("expected a nonnegative 64-bit integer, got " + j.dump());
  return z.get_ui();
}

void require_object(const Json& j, const char* what) {
  if (!j.is_object()) throw ParseError(std::string(what) + " must be a JSON object");
}

void only_keys(const Json& j, std::initializer_list<const char*> keys, const char* what) {
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : j.items()) {
    if (!allowed.count(k)) throw ParseError(std::string("unknown field '") + k + "' in " + what);
  }
}

Json coords_json(const std::map<std::uint64_t, GaussianRational>& coords) {
  Json out = Json::object();
  for (const auto& [k, v] : coords) out[std::to_string(k)] = v.to_string();
  return out;
}

FiniteVector coords_from(const Json& j) {
  require_object(j, "coords");
  FiniteVector v;
  for (const auto& [k, val] : j.items()) {
    std::uint64_t idx = 0;
    try {
      std::size_t used = 0;
      idx = std::stoull(k, &used);
      if (used != k.size()) throw ParseError("");
    } catch (const std::exception&) {
      throw ParseError("coordinate index '" + k + "' is not a nonnegative integer");
    }
    v.set(idx, GaussianRational::parse(as_text(val)));
  }
  return v;
}

}  // namespace

// ----------------------------------------------------------------- shifts

WeightedShift shift_from_json(const Json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "2B") return WeightedShift::constant(2);
    if (s == "B") return WeightedShift::constant(1);
    throw ParseError("unknown shift '" + s + "'");
  }
  require_object(j, "shift");
  only_keys(j, {"constant", "periodic", "closed_form", "sup"}, "shift");
  if (j.contains("constant")) return WeightedShift::constant(rational_from(j["constant"]));
  if (j.contains("periodic")) {
    std::vector<BigRational> pattern;
    for (const auto& w : j["periodic"]) pattern.push_back(rational_from(w));
    return WeightedShift::periodic(std::move(pattern));
  }
  if (j.contains("closed_form")) {
    std::optional<BigRational> sup;
    if (j.contains("sup")) sup = rational_from(j["sup"]);
    return WeightedShift::closed_form(j["closed_form"].get<std::string>(), sup);
  }
  throw ParseError("shift needs one of constant, periodic, closed_form");
}

Json to_json(const WeightedShift& T) {
  switch (T.kind()) {
    case WeightedShift::Kind::Constant:
      return Json{{"constant", to_string(T.weight(1))}};
    case WeightedShift::Kind::Periodic: {
      Json arr = Json::array();
      for (const auto& w : T.pattern()) arr.push_back(to_string(w));
      return Json{{"periodic", arr}};
    }
    case WeightedShift::Kind::ClosedForm: {
      Json out{{"closed_form", T.expression()}};
      if (T.sup_bound()) out["sup"] = to_string(*T.sup_bound());
      return out;
    }
  }
  return {};
}

// ---------------------------------------------------------------- vectors

FiniteVector finite_vector_from_json(const Json& j) {
  require_object(j, "vector");
  only_keys(j, {"coords"}, "vector");
  if (!j.contains("coords")) throw ParseError("finite vector needs 'coords'");
  return coords_from(j["coords"]);
}

Json to_json(const FiniteVector& v) { return Json{{"coords", coords_json(v.coords())}}; }

std::function<BigInt(std::uint64_t)> offsets_from_text(const std::string& rule) {
  const RealExpr e = RealExpr::parse(rule, "k");
  for (std::uint64_t k = 1; k <= 3; ++k) {
    const auto v = e.try_exact(BigRational(static_cast<unsigned long>(k)));
    if (!v || v->get_den() != 1) throw ParseError("offset rule '" + rule + "' must give integers");
  }
  return [e](std::uint64_t k) {
    const auto v = e.try_exact(BigRational(static_cast<unsigned long>(k)));
    if (!v || v->get_den() != 1) throw RuleViolation("offset rule is not an integer at k = " + std::to_string(k));
    return BigInt(v->get_num());
  };
}

BlockVector block_vector_from_json(const Json& j) {
  require_object(j, "vector");
  only_keys(j, {"coords", "blocks", "hc"}, "vector");
  if (j.contains("coords")) return BlockVector::from_finite(coords_from(j["coords"]));
  if (j.contains("blocks")) {
    BlockVector x;
    for (const auto& b : j["blocks"]) {
      require_object(b, "block");
      only_keys(b, {"offset", "scale", "coords"}, "block");
      const BigInt offset = b.contains("offset") ? integer_from(b["offset"]) : BigInt(0);
      const BigRational scale = b.contains("scale") ? rational_from(b["scale"]) : BigRational(1);
      x.add_block(offset, scale, coords_from(b.at("coords")));
    }
    return x;
  }
  if (j.contains("hc")) {
    const Json& h = j["hc"];
    require_object(h, "hc");
    only_keys(h, {"offsets"}, "hc");
    const std::string rule = h.value("offsets", std::string("k^2"));
    return hc_block_vector(offsets_from_text(rule), rule, DenseFamilySpec::standard()).x;
  }
  throw ParseError("vector needs one of coords, blocks, hc");
}

// ----------------------------------------------------------------- phases

Turn turn_from_json(const Json& j) { return turn_reduce(rational_from(j)); }

PhaseSeq phase_from_json(const Json& j) {
  require_object(j, "phase");
  const std::string kind = j.value("kind", std::string());
  if (kind == "constant") {
    only_keys(j, {"kind", "turn"}, "constant phase");
    return PhaseSeq::constant(j.contains("turn") ? turn_from_json(j["turn"]) : Turn::exact(0));
  }
  if (kind == "polynomial") {
    only_keys(j, {"kind", "poly", "coeffs"}, "polynomial phase");
    if (j.contains("poly")) return PhaseSeq::polynomial(SymbolicPoly::parse(j["poly"].get<std::string>()));
    std::vector<SymbolicCoeff> coeffs{SymbolicCoeff()};
    for (const auto& c : j.at("coeffs")) {
      require_object(c, "coefficient");
      SymbolicCoeff sc;
      for (const auto& [name, q] : c.items()) sc.set(name, rational_from(q));
      coeffs.push_back(sc);
    }
    return PhaseSeq::polynomial(SymbolicPoly::from_coeffs(std::move(coeffs)));
  }
  if (kind == "slow_growth") {
    only_keys(j, {"kind", "expr", "radians"}, "slow_growth phase");
    return PhaseSeq::slow_growth(j.at("expr").get<std::string>(), j.value("radians", true));
  }
  if (kind == "geometric") {
    only_keys(j, {"kind", "c", "base", "theta"}, "geometric phase");
    const BigInt c = j.contains("c") ? integer_from(j["c"]) : BigInt(1);
    const BigInt a = j.contains("base") ? integer_from(j["base"]) : BigInt(2);
    const std::string theta = j.contains("theta") ? as_text(j["theta"]) : std::string("0");
    const unsigned base = a.fits_uint_p() && a.get_ui() <= 36 ? static_cast<unsigned>(a.get_ui()) : 2;
    if (theta.find(':') != std::string::npos) return PhaseSeq::geometric(c, a, DigitStream::parse(base, theta));
    return PhaseSeq::geometric(c, a, parse_rational(theta));
  }
  if (kind == "explicit") {
    only_keys(j, {"kind", "start", "turns"}, "explicit phase");
    ExplicitPhase e;
    e.start = j.contains("start") ? u64_from(j["start"]) : 1;
    for (const auto& t : j.at("turns")) e.table.push_back({turn_from_json(t), std::nullopt});
    return PhaseSeq(std::move(e));
  }
  if (kind == "random") {
    only_keys(j, {"kind", "seed", "horizon"}, "random phase");
    return random_rotation(u64_from(j.at("seed")), u64_from(j.at("horizon")));
  }
  throw ParseError("unknown phase kind '" + kind + "'");
}

Json to_json(const PhaseSeq& s) {
  return std::visit(
      [](const auto& p) -> Json {
        using V = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<V, ConstantPhase>) {
          return Json{{"kind", "constant"}, {"turn", p.turn.is_exact() ? to_string(p.turn.exact_value()) : "?"}};
        } else if constexpr (std::is_same_v<V, PolynomialPhase>) {
          Json coeffs = Json::array();
          for (int d = 1; d <= p.poly.degree(); ++d) {
            Json c = Json::object();
            const SymbolicCoeff cd = p.poly.coeff(d);
            for (const auto& [name, q] : cd.coords()) c[name] = to_string(q);
            coeffs.push_back(c);
          }
          return Json{{"kind", "polynomial"}, {"coeffs", coeffs}};
        } else if constexpr (std::is_same_v<V, SlowGrowthPhase>) {
          return Json{{"kind", "slow_growth"}, {"expr", p.expr.text()}, {"radians", p.radians}};
        } else if constexpr (std::is_same_v<V, GeometricPhase>) {
          Json out{{"kind", "geometric"}, {"c", p.c.get_str()}, {"base", p.a.get_str()}};
          if (std::holds_alternative<DigitStream>(p.theta)) {
            out["theta"] = std::get<DigitStream>(p.theta).tag();
          } else {
            out["theta"] = to_string(std::get<BigRational>(p.theta));
          }
          return out;
        } else if constexpr (std::is_same_v<V, ExplicitPhase>) {
          Json turns = Json::array();
          for (const auto& v : p.table) {
            if (!v.turn.is_exact()) throw ParseError("explicit phase with inexact turns is not serializable");
            turns.push_back(to_string(v.turn.exact_value()));
          }
          return Json{{"kind", "explicit"}, {"start", p.start}, {"turns", turns}};
        } else {
          return Json{{"kind", "patched"}, {"description", p.description}};
        }
      },
      s.variant());
}

ProductPoint point_from_json(const Json& j) {
  require_object(j, "point");
  only_keys(j, {"vector", "torus"}, "point");
  ProductPoint p;
  if (j.contains("vector")) p.vector = finite_vector_from_json(j["vector"]);
  if (j.contains("torus")) {
    for (const auto& t : j["torus"]) p.torus.push_back(turn_from_json(t));
  }
  return p;
}

Json to_json(const ProductPoint& p) {
  Json torus = Json::array();
  for (const auto& t : p.torus) torus.push_back(t.to_string());
  return Json{{"vector", to_json(p.vector)}, {"torus", torus}};
}

// ---------------------------------------------------------------- bundles

Bundle assemble_bundle(const std::string& name, std::uint64_t horizon) {
  if (name == "prop41") return prop41_assemble(GeometricDescriptor{}, std::nullopt, horizon);
  if (name == "example44") return example44_assemble(horizon);
  if (name == "prop53") return prop53_assemble(horizon);
  throw ParseError("unknown bundle '" + name + "' (expected prop41, example44 or prop53)");
}

Json to_json(const Bundle& b) {
  Json out{{"bundle", b.name},
           {"horizon", b.horizon},
           {"delta", to_string(b.delta)},
           {"shift", to_json(b.T)},
           {"forbidden", to_json(b.forbidden)},
           {"phase", to_json(b.phase)}};
  Json torus = Json::array();
  for (const auto& t : b.torus) torus.push_back(to_json(t));
  out["torus"] = torus;
  out["provenance"] = b.provenance;
  if (b.adversarial) {
    const AdversarialPhase& ad = *b.adversarial;
    Json alphas = Json::array();
    for (std::uint64_t n = 0; n < ad.alphas.size(); ++n) {
      if (ad.alphas[n] != 0) alphas.push_back(n);
    }
    const auto rule = b.provenance.find("N");
    const bool minimal = rule != b.provenance.end() && rule->second.ends_with("(minimal)");
    out["params"] = Json{{"c", ad.f.c.get_str()}, {"a", ad.f.a.get_str()}, {"N", ad.N},
                         {"N_rule", minimal ? "minimal" : "given"}};
    out["adversarial"] = Json{{"theta", to_string(ad.theta)},
                              {"half_turn_steps", alphas},
                              {"members", ad.members},
                              {"undecided", ad.undecided}};
  }
  return out;
}

Bundle bundle_from_json(const Json& j) {
  require_object(j, "bundle");
  const std::string name = j.at("bundle").get<std::string>();
  const std::uint64_t horizon = u64_from(j.at("horizon"));
  if (name == "prop41" && j.contains("params")) {
    const Json& p = j["params"];
    GeometricDescriptor f{integer_from(p.at("c")), integer_from(p.at("a"))};
    std::optional<std::uint64_t> N;
    if (p.contains("N") && p.value("N_rule", std::string("given")) != "minimal") N = u64_from(p["N"]);
    return prop41_assemble(f, N, horizon);
  }
  return assemble_bundle(name, horizon);
}

// ---------------------------------------------------------------- reports

Json to_json(const AvoidanceCertificate& c) {
  Json out{{"status", to_string(c.status)},
           {"delta", to_string(c.delta)},
           {"horizon", c.horizon},
           {"rows", c.rows.size()},
           {"precision_retries", c.precision_retries},
           {"forbidden", to_json(c.forbidden)}};
  Json rules = Json::object();
  for (AvoidRule r : {AvoidRule::Torus, AvoidRule::ZeroCoordinate, AvoidRule::Sign, AvoidRule::Distance}) {
    rules[to_string(r)] = c.count(r);
  }
  out["rules"] = rules;
  if (c.failure) {
    out["failure"] = Json{{"n", c.failure->n},
                          {"dist_lo", c.failure->distance.lo().to_string(20)},
                          {"dist_hi", c.failure->distance.hi().to_string(20)}};
  }
  return out;
}

Json to_json(const HitReport& r) {
  Json hits = Json::array();
  for (const auto& h : r.hits) {
    hits.push_back(Json{{"n", h.n}, {"dist_lo", h.distance.lo().to_string(20)}, {"dist_hi", h.distance.hi().to_string(20)}});
  }
  Json out{{"epsilon", to_string(r.epsilon)},
           {"horizon", r.horizon},
           {"precision", r.precision},
           {"hits", hits},
           {"indeterminate", r.indeterminate},
           {"contradictions", r.contradictions},
           {"target", to_json(r.target)}};
  if (r.best) {
    out["best"] = Json{{"n", r.best->n},
                       {"dist_lo", r.best->distance.lo().to_string(20)},
                       {"dist_hi", r.best->distance.hi().to_string(20)}};
  }
  return out;
}

}  // namespace orbitlab
