const images = [
  { url: "images/one.jpg", alt: "One", id: "img1", description: "First image" },
  { url: "images/two.jpg", alt: "Two", id: "img2", description: "Second image" },
  { url: "images/three.jpg", alt: "Three", id: "img3", description: "Third image" }
];
