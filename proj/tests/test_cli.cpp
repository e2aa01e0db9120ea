#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "cli/commands.hpp"
#include "hjt/expression.hpp"

using namespace hjt;
using namespace hjt::cli;

namespace {

const std::string kData = std::string(HJT_SOURCE_DIR) + "/data/candidates/";

Symbols with_params(std::initializer_list<const char*> names) {
  Symbols s;
  for (const char* n : names) s.params.insert(n);
  return s;
}

std::string shape(const Expr& e) {
  switch (e->op) {
    case ExprOp::Num: return print_expression(e);
    case ExprOp::Var: return e->name;
    case ExprOp::Neg: return "Neg(" + shape(e->args[0]) + ")";
    case ExprOp::Call: return e->name + "(" + shape(e->args[0]) + ")";
    default: {
      static const std::map<ExprOp, const char*> n{{ExprOp::Add, "Add"}, {ExprOp::Sub, "Sub"}, {ExprOp::Mul, "Mul"},
                                                   {ExprOp::Div, "Div"}, {ExprOp::Pow, "Pow"}};
      return std::string(n.at(e->op)) + "(" + shape(e->args[0]) + "," + shape(e->args[1]) + ")";
    }
  }
}

RunConfig config(const std::string& cmd, std::map<std::string, std::string> kv) {
  return build_config(cmd, kv, {});
}

}  // namespace

TEST(Expression, Precedence) {
  EXPECT_EQ(shape(parse_expression("(k*q2 - l)/q1", with_params({"k", "l"}))), "Div(Sub(Mul(k,q2),l),q1)");
  EXPECT_EQ(shape(parse_expression("sqrt(2*E1 - q1^2)", with_params({"E1"}))), "sqrt(Sub(Mul(2,E1),Pow(q1,2)))");
  EXPECT_EQ(shape(parse_expression("-q1^2")), "Neg(Pow(q1,2))");
  EXPECT_EQ(shape(parse_expression("2^3^q1")), "Pow(2,Pow(3,q1))");
  EXPECT_EQ(shape(parse_expression("q1 - q2 - q3")), "Sub(Sub(q1,q2),q3)");
  EXPECT_EQ(shape(parse_expression("q1 * -q2 + 2^-t")), "Add(Mul(q1,Neg(q2)),Pow(2,Neg(t)))");
}

TEST(Expression, Errors) {
  try {
    parse_expression("q1 +");
    FAIL();
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.line(), 1);
    EXPECT_EQ(e.col(), 5);
  }
  try {
    parse_expression("(q1 * 2");
    FAIL();
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.col(), 8);
  }
  EXPECT_THROW(parse_expression(""), SyntaxError);
  EXPECT_THROW(parse_expression("q1 2"), SyntaxError);
  EXPECT_THROW(parse_expression("1.e"), SyntaxError);
  for (const char* bad : {"k*q1", "tan(q1)", "q0", "x"}) {
    try {
      parse_expression(bad);
      FAIL() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::UnknownIdentifier) << bad;
    }
  }
}

TEST(Expression, RoundTrip) {
  std::vector<std::string> corpus{"a - (b - c)", "2^3^2", "(-q1)^2", "--q1", "q1 / (q2 * q3)", "1e-08 * q1",
                                  "-(q1 + q2) * 0.1", "exp(-q1^2 / 2) + abs(q2)", "q1^(1 / 3)", "(q1^2)^3",
                                  "0.30000000000000004 + q1"};
  for (const auto& entry : std::filesystem::directory_iterator(kData)) {
    std::ifstream in(entry.path());
    std::string line;
    while (std::getline(in, line)) {
      auto eq = line.find('=');
      if (eq != std::string::npos && line[0] != '#') corpus.push_back(line.substr(eq + 1));
    }
  }
  Symbols any = with_params({"a", "b", "c", "k", "l", "k1", "E1", "E2", "C", "s"});
  for (const auto& text : corpus) {
    Expr e = parse_expression(text, any);
    std::string printed = print_expression(e);
    EXPECT_TRUE(same_expression(e, parse_expression(printed, any))) << text << " -> " << printed;
    EXPECT_EQ(printed, print_expression(parse_expression(printed, any)));
  }
}

TEST(Expression, DualEvaluation) {
  Expr e = parse_expression("q1^2 * sin(q2) - k / q1", with_params({"k"}));
  ScalarField f = expression_field(e, state_slots(2, {'q'}), {{"k", 3.0}});
  Vec q = to_vec({1.3, 0.4});
  EXPECT_DOUBLE_EQ(f(q), 1.69 * std::sin(0.4) - 3.0 / 1.3);
  Vec g = grad(f, q);
  EXPECT_NEAR(g[0], 2.6 * std::sin(0.4) + 3.0 / 1.69, 1e-14);
  EXPECT_NEAR(g[1], 1.69 * std::cos(0.4), 1e-14);
  auto h = hessian(f, q);
  EXPECT_NEAR(h.value(0, 1), 2.6 * std::cos(0.4), 1e-14);
  EXPECT_NEAR(h.value(0, 0), 2 * std::sin(0.4) - 6.0 / (1.69 * 1.3), 1e-13);
  // negative base with an integral exponent stays real
  ScalarField cube = expression_field(parse_expression("q1^3"), state_slots(1, {'q'}), {});
  EXPECT_DOUBLE_EQ(cube(to_vec({-2})), -8.0);
  EXPECT_FALSE(expression_field(parse_expression("sqrt(q1)"), state_slots(1, {'q'}), {}).contains(to_vec({-1})));
}

TEST(CandidateFile, Parsing) {
  auto src = parse_candidate_source("param k\nparam l\nw2 = (k*q2 - l)/q1  # second\nw1 = k\n");
  EXPECT_EQ(src.kind, SectionKind::vector);
  EXPECT_EQ(src.params, (std::set<std::string>{"k", "l"}));
  ASSERT_EQ(src.components.size(), 2u);
  EXPECT_EQ(print_expression(src.components[1]), "(k * q2 - l) / q1");
  auto x = expression_section(src, {{"k", 1}, {"l", 0}}, "X");
  EXPECT_EQ(x(to_vec({2, 3})), to_vec({1, 1.5}));
  try {
    parse_candidate_source("param k\nw1 = k *\n");
    FAIL();
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.line(), 2);
    EXPECT_EQ(e.col(), 9);
  }
  EXPECT_THROW(parse_candidate_source("w1 = q1\na2 = q2\n"), SyntaxError);
  EXPECT_THROW(parse_candidate_source("w1 = q1\nw3 = q2\n"), SyntaxError);
  EXPECT_THROW(parse_candidate_source("w1 = k\n"), Error);
  EXPECT_EQ(parse_candidate_source("a1 = 0\na2 = 1/q1\n").kind, SectionKind::oneform);
}

TEST(Cli, ConfigParsing) {
  EXPECT_EQ(parse_params("E1=1, E2 = 0.5").at("E2"), 0.5);
  EXPECT_THROW(parse_params("E1"), Error);
  auto g = parse_grid("q1:0.2:0.8:20,q2:0:1:1", "--grid");
  ASSERT_EQ(g.size(), 2u);
  EXPECT_EQ(g[0].count, 20u);
  EXPECT_THROW(parse_grid("q1:0:1:0", "--grid"), Error);
  EXPECT_THROW(parse_grid("q1:0:1", "--grid"), Error);
  EXPECT_THROW(config("verify", {{"system", "ho2d"}, {"tol", "0"}}), Error);
  EXPECT_THROW(config("verify", {{"system", "ho2d"}, {"bogus", "1"}}), Error);
  EXPECT_THROW(config("verify", {}), Error);
  auto path = std::filesystem::temp_directory_path() / "hjt_test_config.ini";
  {
    std::ofstream f(path);
    f << "# run settings\nsystem = ho2d\nmode = standard\n[params]\nE1 = 2\n";
  }
  auto cf = read_config(path.string());
  EXPECT_EQ(cf.run.at("system"), "ho2d");
  EXPECT_EQ(cf.params.at("E1"), 2.0);
  std::filesystem::remove(path);
}

TEST(Cli, VerifyExitCodes) {
  EXPECT_EQ(run(config("verify", {{"system", "ho2d"}, {"candidate", "XE"}, {"params", "E1=1,E2=0.5"},
                                  {"mode", "standard"}})).code, kPass);
  EXPECT_EQ(run(config("verify", {{"system", "ho2d"}, {"candidate", "XCl"}, {"params", "C=1,l=0"},
                                  {"mode", "standard"}})).code, kFail);
  EXPECT_EQ(run(config("verify", {{"system", "ho2d"}, {"candidate", "XCl"}, {"params", "C=1,l=0"}})).code, kPass);
  EXPECT_EQ(run(config("verify", {{"system", "free2d"}, {"candidate", "alpha1"}, {"mode", "standard"}})).code,
            kFail);
  try {
    run(config("verify", {{"system", "nosuch"}, {"candidate", "X"}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(exit_code_for(e.kind()), kUsage);
  }
  try {
    run(config("verify", {{"system", "ho2d"}, {"candidate", "XE"}, {"grid", "q1:5:6:3,q2:5:6:3"}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EmptyGrid);
    EXPECT_EQ(exit_code_for(e.kind()), kUsage);
  }
}

TEST(Cli, CandidateFileMatchesRegistry) {
  auto file = run(config("verify", {{"system", "free2d"}, {"candidate-file", kData + "free_family.hjc"},
                                    {"candidate", "X1"}, {"params", "k=2,l=0.3"}, {"format", "csv"}}));
  auto reg = run(config("verify", {{"system", "free2d"}, {"candidate", "X1"}, {"params", "k=2,l=0.3"},
                                   {"format", "csv"}}));
  EXPECT_EQ(file.code, kPass);
  EXPECT_EQ(file.text, reg.text);
  EXPECT_THROW(run(config("verify", {{"system", "free2d"}, {"candidate", "X1"}, {"params", "zz=1"}})), Error);
}

TEST(Cli, IntegrateAndDrift) {
  auto out = run(config("integrate", {{"system", "ho2d"}, {"x0", "1,0,0,1"}, {"format", "csv"}}));
  EXPECT_EQ(out.code, kPass);
  auto lines = split(out.text, '\n');
  ASSERT_GE(lines.size(), 3u);
  EXPECT_EQ(lines.front(), "t,x1,x2,x3,x4,f1,f2,f3,f4\r");
  EXPECT_EQ(lines.back().rfind("max_drift,,,,,", 0), 0u);
  auto last = split(lines[lines.size() - 2], ',');
  EXPECT_NEAR(std::stod(last[1]), std::cos(1.0), 1e-9);
  EXPECT_NEAR(std::stod(last[4]), std::cos(1.0), 1e-9);
  auto proj = run(config("integrate", {{"system", "ho2d"}, {"candidate", "XE"}}));
  auto j = json::parse(proj.text);
  EXPECT_LE(j["max_distance"].get<double>(), 1e-5);
  // the oscillator branch reaches the turning point q = sqrt(2E) and leaves the domain
  auto abort = run(config("integrate", {{"system", "ho1d"}, {"candidate", "Xplus"}, {"x0", "0.5"}, {"steps", "3000"},
                                        {"format", "csv"}}));
  EXPECT_EQ(abort.code, kNumeric);
  EXPECT_NE(abort.text.find("max_distance_partial"), std::string::npos);
}

TEST(Cli, Brackets) {
  EXPECT_EQ(run(config("brackets", {{"system", "ho2d"}, {"integrals", "f2,f3"}, {"require-involution", "true"}})).code,
            kPass);
  auto f14 = run(config("brackets", {{"system", "ho2d"}, {"integrals", "f1,f4"}, {"require-involution", "true"}}));
  EXPECT_EQ(f14.code, kFail);
  EXPECT_GT(json::parse(f14.text)["table"][0][1].get<double>(), 0.1);
  auto one = json::parse(run(config("brackets", {{"system", "ho2d"}, {"integrals", "f1"}})).text);
  EXPECT_EQ(one["table"], json::parse("[[0.0]]"));
  EXPECT_THROW(run(config("brackets", {{"system", "ho2d"}, {"integrals", "f9"}})), Error);
}

TEST(Cli, Scan) {
  auto e = json::parse(run(config("scan", {{"system", "ho2d"}, {"integrals", "f2,f3"}})).text);
  ASSERT_EQ(e["cells"].size(), 25u);
  for (const auto& cell : e["cells"]) {
    EXPECT_EQ(cell["standard"], "pass");
    EXPECT_GT(cell["min_abs_det"].get<double>(), 0.0);
  }
  auto cl = json::parse(run(config("scan", {{"system", "ho2d"}, {"family", "f1f4"}})).text);
  for (const auto& cell : cl["cells"]) {
    EXPECT_EQ(cell["generalized"], "pass");
    EXPECT_EQ(cell["standard"], "fail");
  }
  auto free = run(config("scan", {{"system", "free2d"}}));
  EXPECT_EQ(free.code, kPass);
  for (const auto& cell : json::parse(free.text)["cells"]) EXPECT_EQ(cell["standard"], "pass");
}

TEST(Cli, Determinism) {
  auto c = config("verify", {{"system", "ho2d"}, {"candidate", "XCl"}, {"format", "csv"}});
  std::string a = run(c).text;
  EXPECT_EQ(a, run(c).text);
  setenv("HJT_NUM_THREADS", "4", 1);
  std::string b = run(c).text;
  unsetenv("HJT_NUM_THREADS");
  EXPECT_EQ(a, b);
  auto list = run(config("list-systems", {}));
  auto j = json::parse(list.text);
  EXPECT_EQ(j["systems"].size(), system_names().size());
  EXPECT_EQ(list.text, json::parse(list.text).dump(2) + "\n");
}
