#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace {

const std::string kData = ILVELT_DATA_DIR;

struct Case {
  std::string name;
  int exit;
  std::string args;
};

std::vector<Case> load_cases() {
  std::ifstream in(kData + "/golden/cases.txt");
  std::vector<Case> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    Case c;
    ls >> c.name >> c.exit >> std::ws;
    std::getline(ls, c.args);
    out.push_back(c);
  }
  return out;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::pair<int, std::string> run(const std::string& args) {
  const std::string cmd = "cd '" + kData + "' && '" + ILVELT_CLI + "' " + args + " 2>/dev/null";
  FILE* p = ::popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  const int status = ::pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

TEST(CliGolden, CasesLoad) { EXPECT_GE(load_cases().size(), 20u); }

TEST(CliGolden, OutputAndExitCodeMatch) {
  for (const auto& c : load_cases()) {
    SCOPED_TRACE(c.name);
    const auto [code, out] = run(c.args);
    EXPECT_EQ(code, c.exit);
    EXPECT_EQ(out, slurp(kData + "/golden/" + c.name + ".out"));
  }
}

}  // namespace
