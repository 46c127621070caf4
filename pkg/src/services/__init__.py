# Service layer for geometric phase computations