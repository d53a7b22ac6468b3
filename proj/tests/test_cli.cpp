#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>

#include "coarselab/cli.hpp"
#include "support.hpp"

using namespace coarselab;
using namespace support;

namespace {

json load(const std::string& name) {
  std::ifstream in(std::string(COARSELAB_INSTANCES) + "/" + name);
  REQUIRE(in.good());
  return json::parse(in);
}

CommandResult run(const std::string& cmd, const json& doc, Options o = {}) { return run_command(cmd, doc, o); }

// Number of LS.Rs on `width` points straight from the four axioms, over all
// collections of families.
std::size_t oracle_lsr_count(std::size_t width) {
  const unsigned subsets = 1u << width, fams = 1u << subsets;
  auto vee = [&](unsigned f, unsigned g) {
    unsigned out = 0;
    for (unsigned a = 0; a < subsets; ++a)
      for (unsigned b = 0; b < subsets; ++b)
        if (((f >> a) & 1u) && ((g >> b) & 1u)) out |= 1u << (a | b);
    return out;
  };
  std::size_t count = 0;
  for (std::uint64_t c = 0; c < (std::uint64_t{1} << fams); ++c) {
    auto in = [&](unsigned f) { return ((c >> f) & 1u) != 0; };
    bool ok = true;
    for (unsigned a = 0; a < subsets && ok; ++a) ok = in(1u << a);
    for (unsigned f = 0; f < fams && ok; ++f) {
      if (!in(f)) continue;
      for (unsigned g = 0; g < fams && ok; ++g) {
        if ((g & f) == g) ok = in(g);
        if (ok && in(g) && (f & g)) ok = in(f | g);
        if (ok && in(g)) ok = in(vee(f, g));
      }
    }
    count += ok;
  }
  return count;
}

}  // namespace

TEST_CASE("check on the abc instance and its mutation") {
  CommandResult r = run("check", load("abc.json"));
  CHECK(r.exit_code == 0);
  CHECK(r.report["lsr_axioms"]["passed"] == true);
  CHECK(r.report["properties"]["ls_regular"] == false);
  CHECK(r.report["properties"]["ls_regular_witness"]["family"] == "{{a},{a,b}}");
  CHECK(r.lines.front() == "backend: explicit on {a,b,c}");
  CHECK(std::find(r.lines.begin(), r.lines.end(), "LS.R axiom i: pass") != r.lines.end());

  json mut = load("abc-missing-singleton.json");
  CommandResult m = run("check", mut);
  CHECK(m.exit_code == 1);
  const json& i = m.report["lsr_axioms"]["verdicts"][0];
  CHECK(i["axiom"] == "i");
  CHECK(i["status"] == "FAIL");
  CHECK(i["witness"] == "{{c}} is not a member");
  // The witness holds on the document itself: no listed family has {c} as a member.
  bool listed = false;
  for (const auto& fam : mut["lsr"]["members"])
    for (const auto& s : fam) listed = listed || s == json::array({"c"});
  CHECK_FALSE(listed);
}

TEST_CASE("check on line documents samples the axioms") {
  CommandResult r = run("check", load("nat-line-metric.json"));
  CHECK(r.exit_code == 0);
  for (const char* ax : {"lsr i", "lsr ii", "lsr iii", "lsr iv", "near i", "near ii", "near iii", "near iv"}) {
    CHECK(r.report["sampled_axioms"][ax]["failed"] == 0);
    CHECK(r.report["sampled_axioms"][ax]["checked"].get<int>() > 0);
  }
  CHECK(run("check", load("nat-line-topo.json")).exit_code == 0);

  Options o;
  o.seed = 9;
  o.cap = 50;
  CommandResult a = run("check", load("nat-line-metric.json"), o);
  CommandResult b = run("check", load("nat-line-metric.json"), o);
  CHECK(a.render(true) == b.render(true));
  CHECK(a.report["sampled_axioms"]["lsr i"]["checked"] == 50);
  CHECK(a.render(false) != r.render(false));
}

TEST_CASE("partition check includes the nearness axioms") {
  CommandResult r = run("check", load("partition-ab-cd.json"));
  CHECK(r.exit_code == 1);
  CHECK(r.report["lsr_axioms"]["passed"] == true);
  CHECK(r.report["nearness_axioms"]["passed"] == false);

  json doc = load("partition-ab-cd.json");
  doc["lsr"]["blocks"] = json::array({json::array({"a", "b"}), json::array({"c"}), json::array({"d"})});
  CHECK(run("check", doc).exit_code == 0);
}

TEST_CASE("schema and cap errors map to exit codes") {
  json doc = load("abc.json");
  json bad = doc;
  bad.erase("coarselab");
  CHECK(run("check", bad).exit_code == 2);
  bad = doc;
  bad["coarselab"] = 7;
  CHECK(run("check", bad).exit_code == 2);
  bad = doc;
  bad["lsr"]["members"][1][0] = json::array({"z"});
  CHECK(run("check", bad).exit_code == 2);
  bad = doc;
  bad["lsr"]["kind"] = "metric-line";
  CHECK(run("check", bad).exit_code == 2);
  bad = doc;
  bad["space"]["universe"] = json::array({"a", "b", "c", "d", "e"});
  CHECK(run("check", bad).exit_code == 3);
  CHECK(run("frobnicate", doc).exit_code == 2);
  CHECK(run("near", load("nat-line-topo.json")).exit_code == 2);
  CHECK(run("check", json::array()).exit_code == 2);
  Options o;
  o.max_size = 5;
  CHECK(run("mine", json(), o).exit_code == 3);
}

TEST_CASE("asdim reports") {
  CommandResult topo = run("asdim", load("nat-line-topo.json"));
  CHECK(topo.exit_code == 0);
  CHECK(topo.lines.back() == "asdim = 1 certified at windows N ∈ {16, 32, 64, 128, 256, 512}");
  for (const auto& w : topo.report["report"]["windows"]) CHECK(w["multiplicity"] == 2);

  CommandResult metric = run("asdim", load("nat-line-metric.json"));
  CHECK(metric.exit_code == 4);
  CHECK(metric.report["covers"][0]["uniformly_bounded"]["outcome"] == "yes");
  CHECK(metric.report["covers"][1]["uniformly_bounded"]["outcome"] == "no");

  CommandResult abc = run("asdim", load("abc.json"));
  CHECK(abc.exit_code == 0);
  CHECK(abc.lines.front().rfind("asdim = 0", 0) == 0);
  CHECK(abc.report["covers"][1]["uniformly_bounded"]["outcome"] == "no");
}

TEST_CASE("near and bunch commands") {
  CommandResult n = run("near", load("nat-line-metric.json"));
  CHECK(n.exit_code == 1);
  CHECK(n.report["queries"][0]["verdict"]["outcome"] == "yes");
  CHECK(n.report["queries"][1]["verdict"]["outcome"] == "no");

  CommandResult b = run("bunch", load("nat-line-metric.json"));
  REQUIRE(b.exit_code == 0);
  BunchObstruction o = BunchObstruction::from_json(b.report["certificate"]);
  CHECK(o.budget.window == 100'000);
  CHECK(o.budget.max_scale == 32);
  CHECK(validate_obstruction(o).is_yes());

  json doc = load("nat-line-metric.json");
  doc["queries"]["bunch"] = json::array({LineSet::evens().to_json(), LineSet::evens().to_json()});
  CHECK(run("bunch", doc).exit_code == 1);
  doc["lsr"]["kind"] = "topo-trace";
  CHECK(run("bunch", doc).exit_code == 2);

  json top = load("abc.json");
  top["nearness"] = "topological";
  top["queries"]["bunch"] = json::array({json::array({"a"})});
  CommandResult t = run("bunch", top);
  CHECK(t.exit_code == 0);
  CHECK(t.report["search"]["bunch"] == json::array({"{a}", "{a,b}", "{a,c}", "{a,b,c}"}));
  top["queries"]["bunch"] = json::array({json::array({"a"}), json::array({"b"})});
  CHECK(run("bunch", top).exit_code == 1);
}

TEST_CASE("map command") {
  CommandResult line = run("map", load("map-line-double.json"));
  CHECK(line.exit_code == 0);
  CHECK(line.report["verdict"]["outcome"] == "yes");

  CommandResult col = run("map", load("map-collapse.json"));
  CHECK(col.exit_code == 0);

  json doc = load("map-collapse.json");
  doc["map"].erase("g");
  doc["map"]["f"] = {{"table", {{"a", "p"}, {"b", "q"}, {"c", "q"}}}};
  CommandResult f = run("map", doc);
  CHECK(f.exit_code == 1);  // preimage of the bounded {q} is {b,c}, unbounded

  json shifted = load("map-line-double.json");
  shifted["map"]["f"] = {{"rule", "affine"}, {"a", 1}, {"b", 100}};
  shifted["map"]["g"] = {{"rule", "affine"}, {"a", 1}, {"b", 0}};
  CHECK(run("map", shifted).exit_code == 4);
  shifted["map"]["y"]["space"] = {{"universe", {"a"}}};
  shifted["map"]["y"]["lsr"] = {{"kind", "explicit"}, {"members", json::array()}};
  CHECK(run("map", shifted).exit_code == 2);
}

TEST_CASE("miner finds property boundaries and its documents re-check") {
  Options o;
  o.target = "non-ls-regular";
  CommandResult r = run("mine", json(), o);
  REQUIRE(r.exit_code == 0);
  CHECK(r.report["width"].get<int>() <= 3);
  CommandResult again = run("check", r.report["document"]);
  CHECK(again.exit_code == 0);
  CHECK(again.report["properties"]["ls_regular"] == false);

  o.target = "nearness-iv";
  CommandResult iv = run("mine", json(), o);
  REQUIRE(iv.exit_code == 0);
  const Document d = Document::parse(iv.report["document"]);
  CHECK(check_lsr_axioms(d.backend.lsr()).passed());
  CHECK_FALSE(check_nearness_axioms(ExplicitNearness::induced(d.backend.lsr())).passed("iv"));

  o.target = "non-a-lsr";
  CHECK(run("mine", json(), o).exit_code == 1);

  CHECK(run("mine", json(), o).render(true) == run("mine", json(), o).render(true));
}

TEST_CASE("enumeration and documents") {
  CHECK(enumerate_lsrs(1).size() == oracle_lsr_count(1));
  CHECK(enumerate_lsrs(2).size() == oracle_lsr_count(2));
  CHECK(enumerate_lsrs(3).size() == all_lsrs(3).size());
  for (const auto& c : enumerate_lsrs(3)) {
    const Document d = Document::parse(lsr_document(c));
    CHECK(d.backend.lsr() == c);
  }
  CHECK_THROWS_AS(enumerate_lsrs(4), Error);
}

TEST_CASE("rendering") {
  CommandResult r = run("check", load("abc.json"));
  const std::string text = r.render(false);
  CHECK(text.rfind(std::string(kVersion) + "\n", 0) == 0);
  const auto j = nlohmann::json::parse(r.render(true));
  CHECK(j["version"] == kVersion);
  CHECK(j["exit_code"] == 0);
  std::function<bool(const nlohmann::json&)> integral = [&](const nlohmann::json& x) {
    if (x.is_number_float()) return false;
    if (x.is_structured())
      for (const auto& e : x)
        if (!integral(e)) return false;
    return true;
  };
  CHECK(integral(j));
  CHECK(integral(nlohmann::json::parse(run("bunch", load("nat-line-metric.json")).render(true))));
}
