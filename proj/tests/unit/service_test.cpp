#include <gtest/gtest.h>
#include <httplib.h>

#include <fstream>
#include <sstream>
#include <thread>

#include "exact/service/service.hpp"
#include "support.hpp"

using namespace exact;
using namespace exact::service;

namespace {

class Fig2Service : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    out_dir_ = new std::filesystem::path(exact::testing::scratch_dir("service"));
    std::ostringstream out, err;
    ASSERT_EQ(cmd_analyze(exact::testing::fixture_dir("fig2"), *out_dir_, std::nullopt, out, err), 0) << err.str();
  }
  static void TearDownTestSuite() {
    std::filesystem::remove_all(*out_dir_);
    delete out_dir_;
  }

  static LoadedAnalysis load() { return load_analysis(*out_dir_); }
  static const std::filesystem::path& dir() { return *out_dir_; }

  static std::filesystem::path* out_dir_;
};

std::filesystem::path* Fig2Service::out_dir_ = nullptr;

std::vector<std::string> strings(const Json& j) { return j.get<std::vector<std::string>>(); }

}  // namespace

TEST_F(Fig2Service, XrefWriteGroup) {
  auto r = xref(load().bundle, "Report!F5");
  ASSERT_EQ(r.writers.size(), 1u);
  EXPECT_EQ(r.writers[0].str(), "Module1.Main");
  EXPECT_TRUE(r.readers.empty());
  EXPECT_EQ(r.groups, (std::vector<std::string>{"Module1.Main/w6"}));
}

TEST_F(Fig2Service, XrefReadGroup) {
  auto r = xref(load().bundle, "settings!b1");
  ASSERT_EQ(r.readers.size(), 1u);
  EXPECT_EQ(r.readers[0].str(), "Module1.Main");
  EXPECT_EQ(to_json(r).at("query"), "Settings!B1");
}

TEST_F(Fig2Service, XrefUntouchedCell) {
  auto r = xref(load().bundle, "Report!Z99");
  EXPECT_TRUE(r.readers.empty());
  EXPECT_TRUE(r.writers.empty());
  EXPECT_TRUE(r.groups.empty());
}

TEST_F(Fig2Service, XrefRejectsBadInput) {
  auto b = load().bundle;
  EXPECT_THROW(xref(b, "B2"), ReferenceError);
  EXPECT_THROW(xref(b, "Report!A1:B2"), ReferenceError);
  EXPECT_THROW(xref(b, "Report!!"), ReferenceError);
  try {
    xref(b, "Nowhere!A1");
    FAIL();
  } catch (const ReferenceError&) {
    FAIL() << "unknown sheet is not a malformed reference";
  } catch (const Error&) {
  }
}

TEST_F(Fig2Service, SlicesPassThrough) {
  ApiRouter router(load());
  auto structure = router.get("/api/structure");
  EXPECT_EQ(structure.status, 200);
  EXPECT_EQ(structure.content_type, "application/json");
  EXPECT_EQ(structure.body, exact::testing::read_text(dir() / "structure.json"));
  auto doc = Json::parse(exact::testing::read_text(dir() / "analysis.json"));
  EXPECT_EQ(Json::parse(router.get("/api/metrics").body), doc.at("metrics"));
  EXPECT_EQ(Json::parse(router.get("/api/model").body), doc.at("conceptualModel"));
  EXPECT_EQ(Json::parse(router.get("/api/dependencies").body), doc.at("dependencies"));
  EXPECT_EQ(Json::parse(router.get("/api/diagnostics").body), doc.at("diagnostics"));
}

TEST_F(Fig2Service, ProcedureDeps) {
  ApiRouter router(load());
  auto r = router.get("/api/procedures/Module1.Main/deps");
  ASSERT_EQ(r.status, 200);
  auto j = Json::parse(r.body);
  EXPECT_EQ(j.at("nodes").size(), 13u);
  EXPECT_EQ(j.at("edges").size(), 12u);
  EXPECT_EQ(router.get("/api/procedures/Module1.Nope/deps").status, 404);
  EXPECT_EQ(router.get("/api/procedures/NoDot/deps").status, 404);
}

TEST_F(Fig2Service, XrefEndpoint) {
  ApiRouter router(load());
  auto ok = router.get("/api/xref", {{"cell", "Report!F5"}});
  ASSERT_EQ(ok.status, 200);
  EXPECT_EQ(strings(Json::parse(ok.body).at("writers")), (std::vector<std::string>{"Module1.Main"}));
  EXPECT_EQ(router.get("/api/xref").status, 400);
  EXPECT_EQ(router.get("/api/xref", {{"cell", "A1"}}).status, 400);
  EXPECT_EQ(router.get("/api/xref", {{"cell", "Nowhere!A1"}}).status, 404);
  auto missing = router.get("/api/nothing");
  EXPECT_EQ(missing.status, 404);
  EXPECT_TRUE(Json::parse(missing.body).contains("error"));
}

TEST_F(Fig2Service, HttpTransport) {
  auto ui = exact::testing::scratch_dir("ui");
  std::ofstream(ui / "index.html") << "<html>explorer</html>";
  HttpService service(load(), ui);
  int port = service.bind("127.0.0.1", 0);
  ASSERT_GT(port, 0);
  std::thread server([&] { service.listen(); });
  service.wait_until_ready();

  httplib::Client client("127.0.0.1", port);
  auto metrics = client.Get("/api/metrics");
  ASSERT_TRUE(metrics);
  EXPECT_EQ(metrics->status, 200);
  EXPECT_EQ(Json::parse(metrics->body).at("procedures"), 10);
  EXPECT_EQ(metrics->get_header_value("Content-Type"), "application/json");

  auto deps = client.Get("/api/procedures/Module1.Main/deps");
  ASSERT_TRUE(deps);
  EXPECT_EQ(Json::parse(deps->body).at("nodes").size(), 13u);

  auto xr = client.Get("/api/xref?cell=Settings%21B1");
  ASSERT_TRUE(xr);
  EXPECT_EQ(xr->status, 200);
  EXPECT_EQ(strings(Json::parse(xr->body).at("readers")), (std::vector<std::string>{"Module1.Main"}));

  auto bad = client.Get("/api/xref?cell=%21%21");
  ASSERT_TRUE(bad);
  EXPECT_EQ(bad->status, 400);

  auto page = client.Get("/index.html");
  ASSERT_TRUE(page);
  EXPECT_EQ(page->status, 200);
  EXPECT_EQ(page->body, "<html>explorer</html>");

  auto none = client.Get("/api/unknown");
  ASSERT_TRUE(none);
  EXPECT_EQ(none->status, 404);

  service.stop();
  server.join();
  std::filesystem::remove_all(ui);
}

TEST(LoadAnalysis, MissingOrMalformed) {
  auto dir = exact::testing::scratch_dir("load");
  EXPECT_THROW(load_analysis(dir), Error);
  std::ofstream(dir / "analysis.json") << "{oops";
  EXPECT_THROW(load_analysis(dir), Error);
  std::filesystem::remove_all(dir);
}
