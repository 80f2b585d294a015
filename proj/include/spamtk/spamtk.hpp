#pragma once

// Umbrella header for the whole toolkit.

#include "spamtk/classifier.hpp"
#include "spamtk/corpus_gen.hpp"
#include "spamtk/dataset.hpp"
#include "spamtk/decision_tree.hpp"
#include "spamtk/email.hpp"
#include "spamtk/errors.hpp"
#include "spamtk/evaluation.hpp"
#include "spamtk/feature_selection.hpp"
#include "spamtk/features.hpp"
#include "spamtk/io.hpp"
#include "spamtk/naive_bayes.hpp"
#include "spamtk/numfmt.hpp"
#include "spamtk/rng.hpp"
#include "spamtk/svm.hpp"
#include "spamtk/tokenizer.hpp"
#include "spamtk/version.hpp"
