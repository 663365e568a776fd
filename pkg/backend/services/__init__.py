# Services for the branched-cover correspondence calculator