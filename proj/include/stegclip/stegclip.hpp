#pragma once

#include "avi.hpp"
#include "crc32.hpp"
#include "embedding.hpp"
#include "error.hpp"
#include "extraction.hpp"
#include "file_util.hpp"
#include "frame.hpp"
#include "header.hpp"
#include "keying.hpp"
#include "metrics.hpp"
#include "motion.hpp"
#include "ppm.hpp"
#include "testclip.hpp"
