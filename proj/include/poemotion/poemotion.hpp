#pragma once

#include "poemotion/compose.hpp"
#include "poemotion/conllu.hpp"
#include "poemotion/emotion.hpp"
#include "poemotion/error.hpp"
#include "poemotion/extract.hpp"
#include "poemotion/pipeline.hpp"
#include "poemotion/random.hpp"
#include "poemotion/rank.hpp"
#include "poemotion/scorer_client.hpp"
#include "poemotion/stroke.hpp"
#include "poemotion/strokedb.hpp"
#include "poemotion/text_ingest.hpp"
