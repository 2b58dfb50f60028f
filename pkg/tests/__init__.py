# Tests package for richkit
