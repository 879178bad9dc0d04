//! Bundled mini-corpus behind the offline provider: four subjects with two
//! books each, plus the phrase banks used to fill slide content.

use super::plan::BookSeed;

pub struct Book {
    pub subject: &'static str,
    pub title: &'static str,
    pub author: &'static str,
    pub topics: &'static [&'static str],
}

impl Book {
    pub fn seed(&self) -> BookSeed {
        BookSeed::new(self.subject, self.title, self.author)
    }
}

pub const BOOKS: &[Book] = &[
    Book {
        subject: "CS",
        title: "Understanding Deep Learning",
        author: "Simon J. D. Prince",
        topics: UDL_TOPICS,
    },
    Book {
        subject: "CS",
        title: "Data Structures and Algorithms Made Easy",
        author: "Narasimha Karumanchi",
        topics: &[
            "Tree Data Structures",
            "Recursion and Backtracking",
            "Linked Lists",
            "Stacks and Queues",
            "Priority Queues and Heaps",
            "Graph Algorithms",
            "Sorting Algorithms",
            "Searching Techniques",
            "Hashing Techniques",
            "Divide-and-Conquer Approach",
            "Greedy Algorithms",
            "Dynamic Programming Techniques",
            "String Algorithms",
        ],
    },
    Book {
        subject: "Mathematics",
        title: "Linear Algebra Done Right",
        author: "Sheldon Axler",
        topics: &[
            "Vector Spaces",
            "Finite-Dimensional Vector Spaces",
            "Linear Maps",
            "Polynomials over Fields",
            "Eigenvalues and Eigenvectors",
            "Inner Product Spaces",
            "Orthonormal Bases",
            "Operators on Inner Product Spaces",
            "The Spectral Theorem",
            "Singular Value Decomposition",
            "Generalized Eigenvectors",
            "Trace and Determinant",
        ],
    },
    Book {
        subject: "Mathematics",
        title: "Probability and Statistics",
        author: "Morris H. DeGroot",
        topics: &[
            "Introduction to Probability",
            "Conditional Probability",
            "Random Variables and Distributions",
            "Expectation and Variance",
            "Gaussian Distributions",
            "Law of Large Numbers",
            "Central Limit Theorem",
            "Maximum Likelihood Estimation",
            "Bayesian Estimation",
            "Confidence Intervals",
            "Hypothesis Testing",
            "Linear Regression Models",
        ],
    },
    Book {
        subject: "Physics",
        title: "University Physics",
        author: "Hugh D. Young",
        topics: &[
            "Units and Physical Quantities",
            "Motion Along a Line",
            "Newton's Laws of Motion",
            "Work and Kinetic Energy",
            "Momentum and Collisions",
            "Rotational Dynamics",
            "Periodic Motion",
            "Mechanical Waves",
            "Thermodynamics First Law",
            "Entropy and the Second Law",
            "Electric Fields",
            "Geometric Optics",
            "Special Relativity Basics",
        ],
    },
    Book {
        subject: "Physics",
        title: "Introduction to Electrodynamics",
        author: "David J. Griffiths",
        topics: &[
            "Vector Analysis Review",
            "Electrostatics Fundamentals",
            "Electric Potential",
            "Work and Energy in Electrostatics",
            "Method of Images",
            "Electric Fields in Matter",
            "Magnetostatics",
            "Magnetic Fields in Matter",
            "Electromotive Force",
            "Maxwell's Equations",
            "Electromagnetic Waves",
            "Radiation from Dipoles",
        ],
    },
    Book {
        subject: "Economics",
        title: "Macroeconomics",
        author: "N. Gregory Mankiw",
        topics: &[
            "Introduction to Macroeconomics",
            "Measuring National Income",
            "The Cost of Living",
            "Growth Theory in Macroeconomics",
            "Unemployment and the Labor Market",
            "Money and Inflation",
            "The Open Economy",
            "Aggregate Demand and Supply",
            "The IS-LM Model",
            "Monetary Policy Tools",
            "Fiscal Policy and Government Debt",
            "Consumption Theories",
            "Business Cycle Dynamics",
        ],
    },
    Book {
        subject: "Economics",
        title: "Microeconomics",
        author: "Robert S. Pindyck",
        topics: &[
            "Supply and Demand Basics",
            "Consumer Behavior",
            "Individual and Market Demand",
            "Uncertainty and Consumer Choice",
            "Production Functions",
            "The Cost of Production",
            "Perfect Competition",
            "Monopoly and Monopsony",
            "Pricing with Market Power",
            "Game Theory and Strategy",
            "General Equilibrium",
            "Externalities and Public Goods",
        ],
    },
];

/// Topic list of the one-shot example for "Understanding Deep Learning".
pub const UDL_TOPICS: &[&str] = &[
    "Math for Deep Learning Basics",
    "Intro to Supervised Learning",
    "Shallow Neural Networks",
    "Activation Functions",
    "Composing Neural Networks",
    "Gradient Descent Optimization",
    "Stochastic Gradient Descent",
    "Adam Optimization Algorithm",
    "Backpropagation in Toy Model",
    "Initialization Techniques",
    "MNIST-1D Performance Analysis",
    "Bias-Variance Trade-off",
    "Double Descent Phenomenon",
    "L2 Regularization Techniques",
    "Implicit Regularization Methods",
    "Model Ensembling Techniques",
    "Bayesian Methods in ML",
    "Data Augmentation Techniques",
    "1D Convolution Basics",
    "Convolution for MNIST-1D",
    "2D Convolution Basics",
    "Downsampling & Upsampling",
    "Shattered Gradients Issue",
    "Residual Networks Introduction",
    "Batch Normalization Role",
    "Self-Attention Mechanisms",
    "Multi-Head Self-Attention",
    "Graph Encoding Techniques",
    "Graph Classification Methods",
    "Neighborhood Sampling",
    "Graph Attention Mechanisms",
    "GAN Toy Example",
    "Wasserstein Distance in GANs",
    "1D Normalizing Flows Intro",
    "Autoregressive Flows Intro",
    "Latent Variable Models Intro",
    "Reparameterization Trick",
    "Importance Sampling Methods",
    "Diffusion Encoder Basics",
    "1D Diffusion Model Basics",
    "Reparameterized Model Intro",
    "Diffusion Models Families",
    "Markov Decision Processes Intro",
    "Dynamic Programming Basics",
    "Monte Carlo Methods Intro",
    "Temporal Difference Methods",
    "Control Variates Methods",
    "Random Data Generation",
    "Full-Batch Gradient Descent",
    "Lottery Tickets Hypothesis",
    "Adversarial Attacks Techniques",
    "Bias Mitigation Strategies",
    "Explainability Techniques",
];

/// Outline of the one-shot example for "Tree Data Structures". It has 17
/// titles, two more than the slide limit.
pub const TREE_OUTLINE: &[&str] = &[
    "Introduction : Definition & Characteristics",
    "Introduction : Example of a Tree",
    "Types of Trees",
    "Binary Trees : What are they?",
    "Binary Trees : Searching an element",
    "Tree Traversal",
    "Pre-order Traversal",
    "In-order Traversal",
    "Post-order Traversal",
    "Comparing traversal methods",
    "Binary Search Trees: Introduction",
    "Binary Search Trees: Time Complexity",
    "BST v/s Binary Trees",
    "Applications of Trees",
    "Huffman Algorithm : History",
    "Huffman Algorithm : Pseudocode",
    "Summary of Trees",
];

/// Generic topics used for books outside the corpus.
pub const GENERIC_TOPIC_PATTERNS: &[&str] = &[
    "Introduction to {s}",
    "Foundations of {s}",
    "Core Models in {s}",
    "Key Theorems in {s}",
    "Methods of {s}",
    "Measurement in {s}",
    "Modern {s} Techniques",
    "Case Studies in {s}",
    "Open Problems in {s}",
    "Applications of {s}",
    "History of {s}",
];

/// Outline slots: the leading ones always appear, the optional ones are
/// sampled to reach 12 to 15 titles. `{t}` is the lecture topic.
pub const OUTLINE_LEAD: &[&str] = &["Introduction to {t}", "Motivation", "Key Definitions", "Core Idea of {t}"];
pub const OUTLINE_OPTIONAL: &[&str] = &[
    "Historical Background",
    "Formal Definition",
    "Notation and Assumptions",
    "Main Properties",
    "A Worked Example",
    "Step-by-Step Derivation",
    "Algorithm Overview",
    "Pseudocode Walkthrough",
    "Complexity Analysis",
    "Common Variants",
    "Comparing the Variants",
    "{t} vs Alternatives",
    "Trade-offs in Practice",
    "Applications of {t}",
    "Case Study",
    "Common Pitfalls",
    "Experimental Results",
    "Open Questions",
];
pub const OUTLINE_TAIL: &[&str] = &["Summary of {t}", "References"];

pub const DESCRIPTION_OPENERS: &[&str] = &[
    "{C} is a central theme of {t}.",
    "This slide covers {c}.",
    "Here we look at {c}.",
    "{C} builds directly on the previous material.",
    "We now turn to {c}.",
];
pub const DESCRIPTION_MIDDLES: &[&str] = &[
    "The idea appears throughout {t} and connects several earlier results.",
    "It is best understood by tracing a small example by hand.",
    "Most textbook treatments state it formally and then give intuition.",
    "Its assumptions are mild, which explains its wide use.",
    "Students often find the notation harder than the idea itself.",
    "Practitioners rely on it when reasoning about {t}.",
];
pub const DESCRIPTION_CLOSERS: &[&str] = &[
    "Applications include modelling, analysis and design tasks.",
    "We will revisit it when discussing later topics.",
    "Keep this in mind for the exercises.",
    "The following slides develop the details.",
];

pub const BULLET_PATTERNS: &[&str] = &[
    "Definition of {w}",
    "Role of {w} in {t}",
    "Assumptions behind {w}",
    "Worked example with {w}",
    "Limitations of {w}",
    "Relation to earlier results",
    "Typical applications",
    "Common mistakes",
    "Computational cost",
    "Key intuition",
    "Formal statement",
    "Special cases",
    "Extensions and variants",
    "Open research directions",
];

pub const HEADING_PATTERNS: &[&str] = &["Key Idea", "In Short", "Why It Matters", "Main Result", "Takeaway", "Recall"];

pub const URL_HOSTS: &[&str] = &[
    "https://en.wikipedia.org/wiki/",
    "https://ocw.mit.edu/courses/",
    "https://arxiv.org/abs/",
    "https://www.khanacademy.org/",
    "https://openstax.org/details/books/",
    "https://www.coursera.org/learn/",
];

pub const INSTRUCTORS: &[&str] = &[
    "Dr. A. Rivera",
    "Prof. M. Chen",
    "Dr. K. Okafor",
    "Prof. L. Novak",
    "Dr. S. Iyer",
    "Prof. J. Lindqvist",
    "Dr. H. Tanaka",
    "Prof. E. Moreau",
];

pub const INSTITUTIONS: &[&str] = &[
    "Northfield University",
    "Institute of Applied Science",
    "Lakeside College",
    "Technical University of Westmark",
    "Riverside Polytechnic",
];

pub const EQUATIONS: &[&str] = &[
    r"f(x) = \frac{1}{\sigma\sqrt{2\pi}} e^{-\frac{(x-\mu)^2}{2\sigma^2}}",
    r"\nabla_\theta L = \frac{1}{N}\sum_{i=1}^{N} \nabla_\theta \ell(x_i, y_i)",
    r"E[X] = \sum_{x} x \, p(x)",
    r"A v = \lambda v",
    r"F = m a",
    r"\oint_{\partial S} E \cdot dl = -\frac{d}{dt}\int_S B \cdot dA",
    r"Y = C + I + G + (X - M)",
    r"T(n) = 2T(n/2) + O(n)",
    r"\sigma(z) = \frac{1}{1 + e^{-z}}",
    r"\mathrm{Var}(X) = E[X^2] - E[X]^2",
    r"P(A \mid B) = \frac{P(B \mid A) P(A)}{P(B)}",
    r"\theta_{t+1} = \theta_t - \eta \nabla L(\theta_t)",
];

/// The one-shot equation output for a linear regression caption.
pub const LINEAR_REGRESSION_EQUATION: &str = r"y = w_1x_1 + w_2x_2 + \dots + w_nx_n + b";

pub const TABLE_COLUMNS: &[&str] = &[
    "Method", "Cost", "Accuracy", "Memory", "Year", "Property", "Value", "Case", "Best", "Worst", "Average", "Notes",
];

pub const CODE_SNIPPETS: &[&str] = &[
    "def solve(items):\n    if len(items) <= 1:\n        return items\n    mid = len(items) // 2\n    left = solve(items[:mid])\n    right = solve(items[mid:])\n    return merge(left, right)",
    "def traverse(node):\n    if node is None:\n        return\n    visit(node)\n    traverse(node.left)\n    traverse(node.right)",
    "for epoch in range(epochs):\n    for x, y in loader:\n        loss = model.loss(x, y)\n        loss.backward()\n        opt.step()",
    "import numpy as np\n\nx = np.linspace(0, 1, 50)\ny = 3 * x + np.random.randn(50)\nw = np.polyfit(x, y, 1)\nprint(w)",
    "def search(a, key):\n    lo, hi = 0, len(a) - 1\n    while lo <= hi:\n        mid = (lo + hi) // 2\n        if a[mid] == key:\n            return mid\n        if a[mid] < key:\n            lo = mid + 1\n        else:\n            hi = mid - 1\n    return -1",
    "def simulate(steps, dt):\n    x, v = 0.0, 1.0\n    for _ in range(steps):\n        a = -k * x / m\n        v += a * dt\n        x += v * dt\n    return x",
];

pub const SERIES_NAMES: &[&str] = &["Baseline", "Model A", "Model B", "Control", "Treatment", "Observed", "Predicted"];
pub const CHART_CATEGORIES: &[&[&str]] = &[
    &["2019", "2020", "2021", "2022", "2023"],
    &["Q1", "Q2", "Q3", "Q4", "Q5"],
    &["n=10", "n=20", "n=40", "n=80", "n=160"],
    &["A", "B", "C", "D", "E"],
    &["Mon", "Tue", "Wed", "Thu", "Fri"],
];

/// Words too generic to anchor generated phrases.
pub const STOPWORDS: &[&str] = &[
    "a",
    "an",
    "and",
    "the",
    "of",
    "in",
    "on",
    "for",
    "to",
    "with",
    "by",
    "vs",
    "v/s",
    "what",
    "are",
    "they",
    "is",
    "its",
    "their",
    "&",
    ":",
    "-",
    "introduction",
    "intro",
    "overview",
    "basics",
];

pub fn find_book(title: &str) -> Option<&'static Book> {
    BOOKS.iter().find(|b| b.title.eq_ignore_ascii_case(title.trim()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_subjects_two_books_each() {
        let mut subjects: Vec<&str> = BOOKS.iter().map(|b| b.subject).collect();
        subjects.sort();
        subjects.dedup();
        assert_eq!(subjects.len(), 4);
        for s in subjects {
            assert_eq!(BOOKS.iter().filter(|b| b.subject == s).count(), 2);
        }
    }

    #[test]
    fn corpus_topic_counts_in_range() {
        for b in BOOKS.iter().skip(1) {
            assert!((10..=15).contains(&b.topics.len()), "{}", b.title);
        }
        assert_eq!(TREE_OUTLINE.len(), 17);
    }
}
