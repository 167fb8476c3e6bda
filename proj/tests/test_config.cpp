#include <gtest/gtest.h>

#include <sstream>

#include "schwinger/config.hpp"
#include "schwinger/errors.hpp"
#include "schwinger/units.hpp"

using namespace schwinger;

namespace {

RunConfig parse(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  read_config(in, cfg);
  return cfg;
}

}  // namespace

TEST(Config, DefaultsAreTheReferenceDevice) {
  const RunConfig cfg;
  EXPECT_EQ(cfg.device.g, reference_device().g);
  EXPECT_EQ(cfg.plan.order, 2);
}

TEST(Config, ParsesUnitsAndComments) {
  const RunConfig cfg = parse(
      "# header\n"
      "g_MHz = 10   # trailing comment\n"
      "\n"
      "EC_ueV=0.2\n"
      "gamma_plus_kHz = 20\n"
      "t2_us = 50\n"
      "detuning_kHz = -50\n"
      "states = 1, 2, 3\n"
      "g_list_MHz = 5,10,100\n");
  EXPECT_DOUBLE_EQ(cfg.device.g, 0.01);
  EXPECT_DOUBLE_EQ(cfg.device.E_C, units::ueV_to_rad_per_ns(0.2));
  EXPECT_DOUBLE_EQ(cfg.device.rates.gammaPlus, 20e-6);
  EXPECT_DOUBLE_EQ(cfg.plan.tReadout, 50e3);
  EXPECT_DOUBLE_EQ(cfg.plan.detuning, -50e-6);
  EXPECT_EQ(cfg.plan.stateSet, (StateSet{0, 1, 2}));
  ASSERT_EQ(cfg.plan.gList.size(), 3u);
  EXPECT_DOUBLE_EQ(cfg.plan.gList[2], 0.1);
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  for (const char* text : {"bogus = 1\n", "g_MHz = ten\n", "g_MHz 5\n", "states = 0\n",
                           "order = 1.5\n", "g_list_MHz = \n"}) {
    try {
      parse(text);
      ADD_FAILURE() << "accepted: " << text;
    } catch (const SimError& e) {
      EXPECT_EQ(e.code(), ErrorCode::kConfig) << text;
    }
  }
}

TEST(Config, ErrorsNameTheLine) {
  try {
    parse("g_MHz = 5\nnope = 2\n");
    FAIL();
  } catch (const SimError& e) {
    EXPECT_NE(std::string(e.what()).find(":2:"), std::string::npos) << e.what();
  }
}

TEST(Config, Overrides) {
  RunConfig cfg;
  apply_override(cfg, "Vo_nV=0.25");
  EXPECT_DOUBLE_EQ(cfg.plan.Vo, 0.25);
  EXPECT_THROW(apply_override(cfg, "Vo_nV"), SimError);
}

TEST(Config, MissingFile) {
  RunConfig cfg;
  try {
    load_config_file("/nonexistent/device.cfg", cfg);
    FAIL();
  } catch (const SimError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfig);
  }
}
