#pragma once

#define QREDUCE_VERSION "0.1.0"
