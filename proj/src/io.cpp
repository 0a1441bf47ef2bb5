#include "strat/io.hpp"

namespace strat {

namespace {

i64 get_int(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer())
    fail(Errc::parse, std::string("missing or non-integer field: ") + key);
  return j[key].get<i64>();
}

std::string get_str(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string())
    fail(Errc::parse, std::string("missing or non-string field: ") + key);
  return j[key].get<std::string>();
}

json terms_to_json(const Series& s) {
  json arr = json::array();
  for (auto& [e, c] : s.terms()) arr.push_back(json::array({e, c}));
  return arr;
}

void terms_from_json(const json& arr, Series& s) {
  if (!arr.is_array()) fail(Errc::parse, "polynomial must be a [[exponent,coeff],...] array");
  for (auto& t : arr) {
    if (!t.is_array() || t.size() != 2 || !t[0].is_number_integer() || !t[1].is_number_integer())
      fail(Errc::parse, "polynomial term must be an [exponent, coeff] pair");
    s.set_coeff(t[0].get<i64>(), fp::add(s.coeff(t[0].get<i64>()), t[1].get<i64>(), s.p()));
  }
}

}  // namespace

json pexp_to_json(const PExp& a) { return json{{"num", a.num}, {"den", a.den}}; }

PExp pexp_from_json(const json& j) {
  if (!j.is_object()) fail(Errc::parse, "exponent must be a {num, den} object");
  return PExp(get_int(j, "num"), get_int(j, "den"));
}

json series_to_json(const Series& s) {
  if (s.ring() == RingTag::gm) return terms_to_json(s);
  json j;
  j["side"] = s.ring() == RingTag::disc0 ? "at0" : "atInf";
  j["precision"] = s.prec();
  j["terms"] = terms_to_json(s);
  return j;
}

Series series_from_json(const json& j, i64 p) {
  if (j.is_array()) {
    Series s(RingTag::gm, p);
    terms_from_json(j, s);
    return s;
  }
  if (!j.is_object()) fail(Errc::parse, "series must be an array or a {side, precision, terms} object");
  std::string side = get_str(j, "side");
  RingTag r = side == "at0"    ? RingTag::disc0
              : side == "atInf" ? RingTag::discinf
                                : (fail(Errc::parse, "unknown side: " + side), RingTag::gm);
  i64 prec = get_int(j, "precision");
  if (prec < 1) fail(Errc::validation, "precision must be positive");
  Series s(r, p, prec);
  if (!j.contains("terms")) fail(Errc::parse, "missing field: terms");
  terms_from_json(j["terms"], s);
  return s;
}

json unipclass_to_json(const UnipClass& c) {
  json j;
  j["p"] = c.p;
  j["twist"] = pexp_to_json(c.twist);
  json pre = json::array();
  for (auto& s : c.prefix) pre.push_back(series_to_json(s));
  j["prefix"] = pre;
  if (c.tail.terms.empty()) {
    j["tail"] = json{{"kind", "zero"}};
  } else {
    json ts = json::array();
    for (auto& [e, co] : c.tail.terms) ts.push_back(json::array({co, e}));
    j["tail"] = json{{"kind", "self_similar"}, {"from", c.tail.from}, {"terms", ts}};
  }
  return j;
}

UnipClass unipclass_from_json(const json& j) {
  if (!j.is_object()) fail(Errc::parse, "class must be a JSON object");
  UnipClass c;
  c.p = get_int(j, "p");
  if (!is_prime(c.p)) fail(Errc::validation, "p must be prime");
  c.twist = pexp_from_json(j.contains("twist") ? j["twist"] : json());
  if (!j.contains("prefix") || !j["prefix"].is_array()) fail(Errc::parse, "missing prefix array");
  for (auto& s : j["prefix"]) c.prefix.push_back(series_from_json(s, c.p));
  if (!j.contains("tail") || !j["tail"].is_object()) fail(Errc::parse, "missing tail object");
  std::string kind = get_str(j["tail"], "kind");
  if (kind == "self_similar") {
    c.tail.from = get_int(j["tail"], "from");
    if (!j["tail"].contains("terms") || !j["tail"]["terms"].is_array())
      fail(Errc::parse, "self-similar tail needs a terms array");
    for (auto& t : j["tail"]["terms"]) {
      if (!t.is_array() || t.size() != 2) fail(Errc::parse, "tail term must be a [coeff, exponent] pair");
      i64 co = t[0].get<i64>(), e = t[1].get<i64>();
      i64 v = fp::add(c.tail.terms.count(e) ? c.tail.terms[e] : 0, co, c.p);
      if (v == 0)
        c.tail.terms.erase(e);
      else
        c.tail.terms[e] = v;
    }
  } else if (kind != "zero") {
    fail(Errc::parse, "unknown tail kind: " + kind);
  }
  c.validate();
  return c;
}

json additive_witness_to_json(const AdditiveWitness& w) {
  json ys = json::array();
  for (auto& y : w.ys) ys.push_back(series_to_json(y));
  return json{{"ys", ys}};
}

json tower_to_json(const Tower& t) {
  json j;
  j["p"] = t.p;
  j["ring"] = ring_name(t.ring);
  j["group"] = group_name(t.group);
  j["rank"] = t.rank;
  j["depth"] = t.depth;
  if (t.ring != RingTag::gm) j["precision"] = t.prec;
  json tw = json::array();
  for (auto& a : t.twist) tw.push_back(pexp_to_json(a));
  j["twist"] = tw;
  json ms = json::array();
  for (auto& m : t.levels) {
    json rows = json::array();
    for (i64 i = 0; i < m.rows; ++i) {
      json row = json::array();
      for (i64 k = 0; k < m.cols; ++k) row.push_back(terms_to_json(m.at(i, k)));
      rows.push_back(row);
    }
    ms.push_back(rows);
  }
  j["matrices"] = ms;
  if (t.has_entry_tails()) {
    json et = json::array();
    for (auto& [ij, ts] : t.entry_tails) {
      json terms = json::array();
      for (auto& tt : ts) terms.push_back(json::array({tt.c, tt.e}));
      et.push_back(json::array({ij.first, ij.second, terms}));
    }
    j["entry_tails"] = et;
  }
  return j;
}

namespace {

Mat mat_from_json(const json& j, i64 p, RingTag ring, i64 prec, i64 rank) {
  if (!j.is_array() || (i64)j.size() != rank) fail(Errc::parse, "matrix row count != rank");
  Mat m = Mat::zero(rank, rank, ring, p, prec);
  for (i64 i = 0; i < rank; ++i) {
    if (!j[i].is_array() || (i64)j[i].size() != rank) fail(Errc::parse, "matrix column count != rank");
    for (i64 k = 0; k < rank; ++k) {
      Series s(ring, p, prec);
      terms_from_json(j[i][k], s);
      m.at(i, k) = s;
    }
  }
  return m;
}

}  // namespace

Tower tower_from_json(const json& j) {
  if (!j.is_object()) fail(Errc::parse, "tower must be a JSON object");
  Tower t;
  t.p = get_int(j, "p");
  if (!is_prime(t.p)) fail(Errc::validation, "p must be prime");
  t.ring = ring_from_name(get_str(j, "ring"));
  t.group = group_from_name(get_str(j, "group"));
  t.rank = get_int(j, "rank");
  t.depth = get_int(j, "depth");
  t.prec = t.ring == RingTag::gm ? Series::kExact : get_int(j, "precision");
  if (t.prec < 1) fail(Errc::validation, "precision must be positive");
  if (!j.contains("twist") || !j["twist"].is_array()) fail(Errc::parse, "missing twist array");
  for (auto& a : j["twist"]) t.twist.push_back(pexp_from_json(a));
  if (!j.contains("matrices") || !j["matrices"].is_array() || (i64)j["matrices"].size() != t.depth)
    fail(Errc::parse, "matrices array must have `depth` entries");
  for (auto& m : j["matrices"]) t.levels.push_back(mat_from_json(m, t.p, t.ring, t.prec, t.rank));
  if (j.contains("entry_tails")) {
    if (!j["entry_tails"].is_array()) fail(Errc::parse, "entry_tails must be an array");
    for (auto& et : j["entry_tails"]) {
      if (!et.is_array() || et.size() != 3) fail(Errc::parse, "entry tail must be [i, j, terms]");
      std::vector<TailTerm> ts;
      for (auto& t2 : et[2]) {
        if (!t2.is_array() || t2.size() != 2) fail(Errc::parse, "tail term must be a [coeff, exponent] pair");
        ts.push_back({t2[0].get<i64>(), t2[1].get<i64>()});
      }
      t.entry_tails[{et[0].get<i64>(), et[1].get<i64>()}] = ts;
    }
  }
  t.validate();
  return t;
}

json gauge_witness_to_json(const GaugeWitness& w) {
  json j;
  j["p"] = w.p;
  j["ring"] = ring_name(w.ring);
  j["group"] = group_name(w.group);
  j["rank"] = w.rank;
  if (w.ring != RingTag::gm) j["precision"] = w.prec;
  json ms = json::array();
  for (auto& m : w.psis) {
    json rows = json::array();
    for (i64 i = 0; i < m.rows; ++i) {
      json row = json::array();
      for (i64 k = 0; k < m.cols; ++k) row.push_back(terms_to_json(m.at(i, k)));
      rows.push_back(row);
    }
    ms.push_back(rows);
  }
  j["matrices"] = ms;
  return j;
}

GaugeWitness gauge_witness_from_json(const json& j) {
  if (!j.is_object()) fail(Errc::parse, "witness must be a JSON object");
  GaugeWitness w;
  w.p = get_int(j, "p");
  if (!is_prime(w.p)) fail(Errc::validation, "p must be prime");
  w.ring = ring_from_name(get_str(j, "ring"));
  w.group = group_from_name(get_str(j, "group"));
  w.rank = get_int(j, "rank");
  w.prec = w.ring == RingTag::gm ? Series::kExact : get_int(j, "precision");
  if (w.prec < 1) fail(Errc::validation, "precision must be positive");
  if (!j.contains("matrices") || !j["matrices"].is_array()) fail(Errc::parse, "missing matrices array");
  for (auto& m : j["matrices"]) w.psis.push_back(mat_from_json(m, w.p, w.ring, w.prec, w.rank));
  return w;
}

json parse_json_text(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) fail(Errc::parse, "malformed JSON input");
  return j;
}

namespace {

json offending_to_json(const std::map<i64, i64>& off) {
  json arr = json::array();
  for (auto& [e, c] : off) arr.push_back(json::array({c, e}));
  return arr;
}

bool looks_like_tower(const json& j) { return j.is_object() && j.contains("matrices") && j.contains("depth"); }

RingTag ring_flag_value(const std::string& ring_flag) {
  if (ring_flag.empty()) fail(Errc::usage, "this command requires --ring");
  return ring_from_name(ring_flag);
}

}  // namespace

json run_command(const std::string& cmd, const std::vector<json>& inputs, const RunConfig& cfg,
                 const std::string& ring_flag, const std::string& side_flag) {
  auto need = [&](size_t n) {
    if (inputs.size() != n)
      fail(Errc::usage, cmd + " expects " + std::to_string(n) + " input(s), got " +
                            std::to_string(inputs.size()));
  };
  if (cmd == "classify") {
    need(1);
    Rank1Class c = classify_rank1(tower_from_json(inputs[0]));
    return json{{"alpha", pexp_to_json(c.alpha)}};
  }
  if (cmd == "normalize") {
    need(1);
    UnipClass c = unipclass_from_json(inputs[0]);
    NormalizeResult nr = normalize_support(c, MultiplierSeq::from_digits(c.twist, c.p), cfg);
    return json{{"normalized", unipclass_to_json(nr.normalized)},
                {"witness", additive_witness_to_json(nr.witness)}};
  }
  if (cmd == "decide") {
    need(1);
    UnipClass c = unipclass_from_json(inputs[0]);
    RingTag ring = ring_flag_value(ring_flag);
    DecideResult dr = decide_trivial(c, ring, MultiplierSeq::from_digits(c.twist, c.p), cfg);
    json out{{"trivial", dr.trivial}, {"normalized", unipclass_to_json(dr.normalized)}};
    if (dr.trivial)
      out["witness"] = additive_witness_to_json(dr.witness);
    else
      out["offending"] = offending_to_json(dr.offending);
    return out;
  }
  if (cmd == "lift") {
    need(1);
    LiftResult lr = lift_triangular(tower_from_json(inputs[0]), cfg);
    return json{{"lifted", tower_to_json(lr.lifted)}, {"witness", gauge_witness_to_json(lr.witness)}};
  }
  if (cmd == "glue") {
    need(2);
    if (looks_like_tower(inputs[0])) {
      GlueTowers g = glue_triangular(tower_from_json(inputs[0]), tower_from_json(inputs[1]), cfg);
      return json{{"glued", tower_to_json(g.glued)},
                  {"witness0", gauge_witness_to_json(g.witness0)},
                  {"witnessinf", gauge_witness_to_json(g.witnessinf)}};
    }
    UnipClass a = unipclass_from_json(inputs[0]), b = unipclass_from_json(inputs[1]);
    GlueResult g = glue_rank2(a, b, MultiplierSeq::from_digits(a.twist, a.p), cfg);
    return json{{"glued", unipclass_to_json(g.glued)},
                {"witness0", additive_witness_to_json(g.witness0)},
                {"witnessinf", additive_witness_to_json(g.witnessinf)}};
  }
  if (cmd == "restrict") {
    need(1);
    Tower t = tower_from_json(inputs[0]);
    RingTag ring = ring_flag_value(ring_flag);
    return tower_to_json(restrict_tower(t, ring, cfg.precision));
  }
  if (cmd == "verify") {
    need(3);
    Tower a = tower_from_json(inputs[0]), b = tower_from_json(inputs[1]);
    GaugeWitness w = gauge_witness_from_json(inputs[2]);
    return json{{"verified", verify_witness(a, b, w)}};
  }
  if (cmd == "is-special") {
    need(1);
    RingTag side = side_flag == "rsi"   ? RingTag::discinf
                   : side_flag == "rs0" ? RingTag::disc0
                                        : (fail(Errc::usage, "is-special requires --side rsi|rs0"),
                                           RingTag::gm);
    SpecialReport rep = is_special(tower_from_json(inputs[0]), side, cfg);
    return json{{"special", rep.special}, {"reason", rep.reason}};
  }
  if (cmd == "oracle") {
    need(2);
    auto w = oracle_equivalent(tower_from_json(inputs[0]), tower_from_json(inputs[1]), cfg);
    if (!w) return json{{"equivalent", "not-found"}};
    return json{{"equivalent", true}, {"witness", gauge_witness_to_json(*w)}};
  }
  fail(Errc::usage, "unknown command: " + cmd);
}

}  // namespace strat
