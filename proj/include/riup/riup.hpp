// SPDX-FileCopyrightText: 2026 The riup Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "riup/baselines.hpp"
#include "riup/errors.hpp"
#include "riup/gradient_interp.hpp"
#include "riup/kdtree.hpp"
#include "riup/lossy_codec.hpp"
#include "riup/metrics.hpp"
#include "riup/pc_io.hpp"
#include "riup/pgm_io.hpp"
#include "riup/pipeline.hpp"
#include "riup/point_cloud.hpp"
#include "riup/range_image.hpp"
#include "riup/synth.hpp"
