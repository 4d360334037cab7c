#pragma once

// Input generators for the job parser fuzz.

#include <random>
#include <string>
#include <vector>

namespace fuzz {

inline std::string random_bytes(std::mt19937_64& rng) {
  std::string s(rng() % 160, '\0');
  for (char& ch : s) ch = static_cast<char>(rng() % 256);
  return s;
}

// Random lines from job-file vocabulary, so the fuzz also reaches the block parsers.
inline std::string random_tokens(std::mt19937_64& rng) {
  static const std::vector<std::string> vocab = {
      "job", "pretango", "enumerate", "miura", "raynaud", "mode", "machine", "human", "p=5", "p=7", "p=4", "p=101",
      "ell", "p1", "raynaud", "a=1", "b=3", "l=1", "marks=0,inf", "marks=0,0", "conn", "rank=1", "rank=2", "rank=9",
      "bundle=O", "bundle=Omega_log", "bundle=O+T_log", "special=true", "form", "function", "gtc", "surface", "end",
      "0", "1", "4", "/", "|", "-", "=", "#", "x", "monodromy=all", "action=build", "height=3", "curve", "f", "N",
      "3*[0:0:1]", "[0:1:0]", "chart", "U1", "X - {z=0}", "\t", ""};
  std::string s;
  const int lines = static_cast<int>(rng() % 8);
  for (int l = 0; l < lines; ++l) {
    const int words = static_cast<int>(rng() % 6);
    for (int w = 0; w < words; ++w) s += vocab[rng() % vocab.size()] + (rng() % 5 ? " " : "");
    s += '\n';
  }
  return s;
}

// Byte-level edits of a valid job.
inline std::string mutate(std::mt19937_64& rng, std::string s) {
  const int edits = 1 + static_cast<int>(rng() % 4);
  for (int e = 0; e < edits && !s.empty(); ++e) {
    const std::size_t at = rng() % s.size();
    switch (rng() % 3) {
      case 0: s.erase(at, 1 + rng() % 3); break;
      case 1: s.insert(at, 1, static_cast<char>(rng() % 128)); break;
      default: s[at] = "0123456789 /|=\n#-"[rng() % 17]; break;
    }
  }
  return s;
}

}  // namespace fuzz
