#pragma once

#define TREEAGG_VERSION "0.1.0"
