#pragma once

#include <string>

#include "serialize.hpp"

namespace wk {

// Text ends with a newline. ok = false means a mathematical check failed on valid input.
struct CommandResult {
  bool ok = true;
  std::string text;
};

// "H^n", "H^n(-;Z/m)", "Hom_K(T,-[n])", "Hom_K(-,T[n])"; T is needed for the Hom forms.
FunctorSpec parseFunctorSpec(const std::string& s, const Complex* t);

CommandResult cmdHomology(const Complex& x);
CommandResult cmdHomK(const Complex& x, const Complex& y, int degree);
CommandResult cmdCone(const ChainMap& f);
CommandResult cmdWeightComplex(const Complex& x);
CommandResult cmdWeightComplexMap(const ChainMap& g);
CommandResult cmdPostnikov(const Complex& x);
CommandResult cmdWeightSS(const FunctorSpec& h, const Complex& x, int pages);
CommandResult cmdFilteredSS(const FilteredComplex& fc, int pages);
CommandResult cmdDecalage(const FilteredComplex& fc);
CommandResult cmdDecalageCompare(const FilteredComplex& fc, int pages);
CommandResult cmdTruncateT(const Complex& x, int level, bool upper);
CommandResult cmdAdjacencyCheck(const Complex& x, const Complex& y, int formula, int i, int j);
CommandResult cmdDGValidate(const DGCategoryData& c);
CommandResult cmdMCCheck(const TwistedComplex& m);
CommandResult cmdTrHom(const TwistedComplex& m, const TwistedComplex& n);
// mapJson: bare components array, empty for the zero map.
CommandResult cmdTwistedCone(const TwistedComplex& m, const TwistedComplex& n, const std::string& mapJson);
CommandResult cmdTN(const TwistedComplex& m, int level);
CommandResult cmdRealize(const TwistedComplex& m);
CommandResult cmdK0(const Complex& x);
CommandResult cmdEndK0(const ChainMap& g);
// suite empty: every suite in criterion order.
CommandResult cmdVerify(const std::string& suite, unsigned long seed, int cases);

// Errors that mean the check itself failed rather than the input being unusable.
bool isCheckFailure(ErrorCode c);

}  // namespace wk
