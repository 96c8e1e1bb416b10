#include <doctest.h>

#include <sstream>

#include <nlohmann/json.hpp>

#include "nqd/constants.hpp"
#include "nqd/errors.hpp"
#include "nqd/nuclide_data.hpp"
#include "support.hpp"

using namespace nqd;
using nqd::test::table;

TEST_CASE("lookup returns the tabulated scattering lengths") {
  CHECK(table().lookup({"H", 1, true}).re_b_fm == doctest::Approx(-18.33).epsilon(1e-12));
  CHECK(table().lookup({"Li", 7, false}).re_b_fm == doctest::Approx(-2.22).epsilon(1e-12));
  CHECK_THROWS_AS(table().lookup({"Xx", std::nullopt, false}), UnknownNuclide);
  CHECK_THROWS_AS(table().lookup({"Li", 5, false}), UnknownNuclide);
}

TEST_CASE("omitted isotope selects the natural composite row") {
  const auto& mg = table().lookup({"Mg", std::nullopt, false});
  CHECK_FALSE(mg.isotope.has_value());
  CHECK(mg.re_b_fm == doctest::Approx(5.375));
}

TEST_CASE("duplicate keys are ambiguous") {
  std::istringstream in(
      "symbol,isotope,Z,abundance,re_b_fm,im_b_fm,polarized,radioactive\n"
      "Q,,1,1,1.0,0,0,0\n"
      "Q,,1,1,2.0,0,0,0\n");
  const auto t = NuclideTable::parse(in);
  CHECK_THROWS_AS(t.lookup({"Q", std::nullopt, false}), AmbiguousKey);
}

TEST_CASE("table rejects negative Im[b] and bad headers") {
  std::istringstream neg(
      "symbol,isotope,Z,abundance,re_b_fm,im_b_fm,polarized,radioactive\n"
      "Q,,1,1,1.0,-0.1,0,0\n");
  CHECK_THROWS_AS(NuclideTable::parse(neg), InputError);
  std::istringstream hdr("symbol,isotope,abundance\nQ,,1\n");
  CHECK_THROWS_AS(NuclideTable::parse(hdr), InputError);
}

TEST_CASE("every entry has a non-negative absorption cross-section") {
  for (const auto& e : table().entries()) {
    CHECK(e.im_b_fm >= 0.0);
    CHECK(e.absorption_cross_section_barn() >= 0.0);
  }
  // Im[b] = sigma_a k0 / 4 pi at 2200 m/s: 1 barn -> 2.7806e-4 fm.
  CHECK(constants::im_b_fm_per_barn == doctest::Approx(2.7806e-4).epsilon(1e-4));
  // 1H: sigma_a = 0.3326 barn.
  CHECK(table().lookup({"H", 1, false}).absorption_cross_section_barn() ==
        doctest::Approx(0.3326).epsilon(1e-3));
}

TEST_CASE("composition sums") {
  CrystalComposition lih{"LiH", {{{"Li", 7, false}, 1}, {{"H", 1, true}, 1}}, 68.09 / 4, {}};
  CHECK(composition_sums(lih, table()).re_fm == doctest::Approx(-20.55).epsilon(1e-12));

  CrystalComposition empty{"none", {}, 10.0, {}};
  const auto z = composition_sums(empty, table());
  CHECK(z.re_fm == 0.0);
  CHECK(z.im_fm == 0.0);

  // Hand sum 5.375 - 2 * 18.33.
  CrystalComposition mgh2{"MgH2", {{{"Mg", std::nullopt, false}, 1}, {{"H", std::nullopt, true}, 2}}, 30.5, {}};
  CHECK(composition_sums(mgh2, table()).re_fm == doctest::Approx(-31.285).epsilon(1e-12));

  lih.species.push_back({{"Xx", std::nullopt, false}, 1});
  CHECK_THROWS_AS(composition_sums(lih, table()), UnknownNuclide);
}

TEST_CASE("composition sums are linear in the counts") {
  const auto base = nqd::test::material("LiBH4");
  auto doubled = base;
  for (auto& s : doubled.species) s.count *= 2;
  const auto a = composition_sums(base, table());
  const auto b = composition_sums(doubled, table());
  CHECK(b.re_fm == 2.0 * a.re_fm);
  CHECK(b.im_fm == 2.0 * a.im_fm);
}

TEST_CASE("adding polarized hydrogen lowers the coherent sum") {
  CrystalComposition c{"xH", {{{"Mg", std::nullopt, false}, 1}, {{"H", std::nullopt, true}, 1}}, 30.0, {}};
  double prev = composition_sums(c, table()).re_fm;
  for (int n = 2; n <= 8; ++n) {
    c.species[1].count = n;
    const double now = composition_sums(c, table()).re_fm;
    CHECK(now < prev);
    prev = now;
  }
}

TEST_CASE("composition JSON round trip and validation") {
  const auto lih = nqd::test::material("LiH");
  CHECK(lih.species.size() == 2);
  CHECK(lih.cell_volume_A3 == 68.09);
  const auto back = composition_from_json(composition_to_json(lih));
  CHECK(back.name == lih.name);
  CHECK(back.species.size() == lih.species.size());
  CHECK(back.species[1].key == lih.species[1].key);
  CHECK(back.mass_density_kg_m3 == lih.mass_density_kg_m3);

  auto bad = lih;
  bad.cell_volume_A3 = 0.0;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  bad = lih;
  bad.species[0].count = 0;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
}
