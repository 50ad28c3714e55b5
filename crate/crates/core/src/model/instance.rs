use super::{Metric, ModelError, WeightedGraph};

/// Object `i` must travel from `s` to `t`; it weighs `w`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Demand {
    pub s: usize,
    pub t: usize,
    pub w: u64,
}

impl Demand {
    pub fn unit(s: usize, t: usize) -> Self {
        Demand { s, t, w: 1 }
    }
}

/// A Dial-a-Ride instance. Vehicle `j` starts and ends at `depots[j]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub metric: Metric,
    pub demands: Vec<Demand>,
    pub depots: Vec<usize>,
    pub capacity: u64,
    /// Underlying graph when the metric was induced by one.
    pub graph: Option<WeightedGraph>,
}

impl Instance {
    pub fn new(
        metric: Metric,
        demands: Vec<Demand>,
        depots: Vec<usize>,
        capacity: u64,
    ) -> Result<Self, ModelError> {
        let inst = Instance { metric, demands, depots, capacity, graph: None };
        inst.check()?;
        Ok(inst)
    }

    pub fn with_graph(mut self, graph: WeightedGraph) -> Self {
        self.graph = Some(graph);
        self
    }

    pub fn check(&self) -> Result<(), ModelError> {
        let n = self.metric.n();
        if self.depots.is_empty() {
            return Err(ModelError::NoVehicles);
        }
        if self.capacity == 0 {
            return Err(ModelError::ZeroCapacity);
        }
        for &r in &self.depots {
            if r >= n {
                return Err(ModelError::BadVertex(r));
            }
        }
        for (index, d) in self.demands.iter().enumerate() {
            for v in [d.s, d.t] {
                if v >= n {
                    return Err(ModelError::BadVertex(v));
                }
            }
            if d.w == 0 || d.w > self.capacity {
                return Err(ModelError::BadWeight { index, weight: d.w, capacity: self.capacity });
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.metric.n()
    }
    pub fn m(&self) -> usize {
        self.demands.len()
    }
    pub fn q(&self) -> usize {
        self.depots.len()
    }

    pub fn total_weight(&self) -> u64 {
        self.demands.iter().map(|d| d.w).sum()
    }

    pub fn is_unit(&self) -> bool {
        self.demands.iter().all(|d| d.w == 1)
    }

    /// Distinct depot vertices in increasing order.
    pub fn depot_vertices(&self) -> Vec<usize> {
        let mut v = self.depots.clone();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Lowest vehicle index stationed at each distinct depot vertex, aligned with
    /// [`Instance::depot_vertices`].
    pub fn vehicle_per_depot(&self) -> Vec<usize> {
        self.depot_vertices()
            .iter()
            .map(|&r| self.depots.iter().position(|&x| x == r).unwrap())
            .collect()
    }

    /// Same instance restricted to the given vehicles and objects, renumbered.
    pub fn restrict(&self, vehicles: &[usize], objects: &[usize]) -> Instance {
        Instance {
            metric: self.metric.clone(),
            demands: objects.iter().map(|&o| self.demands[o]).collect(),
            depots: vehicles.iter().map(|&j| self.depots[j]).collect(),
            capacity: self.capacity,
            graph: self.graph.clone(),
        }
    }
}
