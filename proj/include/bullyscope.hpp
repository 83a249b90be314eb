#ifndef BULLYSCOPE_HPP
#define BULLYSCOPE_HPP

#include "bullyscope/analysis.hpp"
#include "bullyscope/corpus.hpp"
#include "bullyscope/error.hpp"
#include "bullyscope/eval.hpp"
#include "bullyscope/features.hpp"
#include "bullyscope/io.hpp"
#include "bullyscope/labels.hpp"
#include "bullyscope/lexicon.hpp"
#include "bullyscope/models.hpp"
#include "bullyscope/numerics.hpp"
#include "bullyscope/resources.hpp"
#include "bullyscope/session.hpp"
#include "bullyscope/synthetic.hpp"
#include "bullyscope/text.hpp"

#endif  // BULLYSCOPE_HPP
