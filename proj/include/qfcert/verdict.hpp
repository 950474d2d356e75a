#pragma once

#include <string>

namespace qfcert {

// Tri-state isotropy verdict; "not decided by bound" is a first-class value,
// never collapsed onto anisotropy.
enum class Verdict { Isotropic, Anisotropic, NotDecided };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Isotropic: return "isotropic";
    case Verdict::Anisotropic: return "anisotropic";
    case Verdict::NotDecided: return "not-decided-by-bound";
  }
  return "?";
}

// Verdict of "q splits as q1 plus q2 and is isotropic iff one of them is".
inline Verdict combine_or(Verdict a, Verdict b) {
  if (a == Verdict::Isotropic || b == Verdict::Isotropic) return Verdict::Isotropic;
  if (a == Verdict::Anisotropic && b == Verdict::Anisotropic) return Verdict::Anisotropic;
  return Verdict::NotDecided;
}

}  // namespace qfcert
